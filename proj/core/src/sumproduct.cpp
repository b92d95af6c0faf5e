#include "vinolab/sumproduct.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "vinolab/detail/kernels.hpp"

namespace vinolab {

GroundSet sign_split(const GroundSet& a) {
  if (a.contains_zero()) throw ZeroElement();
  std::vector<Int> pos, neg;
  for (const auto& v : a.elements()) (v > 0 ? pos : neg).push_back(v);
  if (pos.size() >= neg.size()) return make_ground_set(std::move(pos));
  return make_ground_set(std::move(neg));
}

LevelSelection dyadic_level_select(const QuotientStats& q, std::size_t n_elements) {
  // levels 0 .. ceil(log2 N); d(x) <= N always lands inside
  int ceil_log2 = 0;
  while ((std::size_t{1} << ceil_log2) < n_elements) ++ceil_log2;
  int level_count = ceil_log2 + 1;

  std::vector<Int> masses(static_cast<std::size_t>(level_count), Int(0));
  for (const auto& [quot, d] : q.d_table) {
    int level = 0;
    while (d >= (Int(1) << (level + 1))) ++level;
    masses[static_cast<std::size_t>(level)] += d * d;
  }
  int best = 0;
  for (int i = 1; i < level_count; ++i)
    if (masses[static_cast<std::size_t>(i)] > masses[static_cast<std::size_t>(best)]) best = i;

  LevelSelection out;
  out.level = best;
  out.mass = masses[static_cast<std::size_t>(best)];
  out.level_count = level_count;
  Int lo = Int(1) << best;
  Int hi = Int(1) << (best + 1);
  for (const auto& [quot, d] : q.d_table)
    if (d >= lo && d < hi) out.quotients.push_back(quot);
  // std::map iteration is already value-ascending
  return out;
}

LineFamily build_line_family(const GroundSet& a, int k, const Rat& quotient, const Caps& caps) {
  LineFamily out;
  out.quotient = quotient;
  std::vector<Int> admissible;
  std::vector<PowerSumKey> vectors;
  for (const auto& a1 : a.elements()) {
    Rat a2r = quotient * Rat(a1);
    a2r.canonicalize();
    if (a2r.get_den() != 1) continue;
    Int a2(a2r.get_num());
    if (!a.contains(a2)) continue;
    admissible.push_back(a1);
    out.pairs.emplace_back(a1, a2);
    std::vector<Int> coords(static_cast<std::size_t>(2 * k));
    Int p1 = 1, p2 = 1;
    for (int j = 0; j < k; ++j) {
      p1 *= a1;
      p2 *= a2;
      coords[static_cast<std::size_t>(j)] = p1;
      coords[static_cast<std::size_t>(k + j)] = p2;
    }
    vectors.push_back(PowerSumKey(std::move(coords)));
  }
  if (admissible.empty()) throw QuotientAbsent(to_decimal(quotient));
  out.admissible = make_ground_set(std::move(admissible));
  out.line = VectorSet(static_cast<std::size_t>(2 * k), std::move(vectors));
  (void)caps;
  return out;
}

namespace {

VectorSet fold_sumset(const VectorSet& base, int folds, const Caps& caps) {
  VectorSet acc = base;
  for (int i = 1; i < folds; ++i)
    acc = VectorSet(base.dimension(),
                    detail::pair_sumset(acc.members(), base.members(), caps, "fold_sumset"));
  return acc;
}

}  // namespace

LineLemmaReport check_line_lemmas(const GroundSet& a, int k, int u,
                                  const std::vector<LineFamily>& families, const Caps& caps) {
  if (u < 1) throw std::invalid_argument("check_line_lemmas: u must be >= 1");
  for (const auto& v : a.elements())
    if (v <= 0) throw NonPositiveElements();

  std::vector<LineFamily> sorted = families;
  std::sort(sorted.begin(), sorted.end(),
            [](const LineFamily& x, const LineFamily& y) { return x.quotient < y.quotient; });

  LineLemmaReport report;
  std::vector<VectorSet> folded;
  folded.reserve(sorted.size());
  for (const auto& fam : sorted) folded.push_back(fold_sumset(fam.line, u, caps));

  // (a) all cross sums of distinct families are distinct
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      ++report.checked_pairs;
      if (!detail::all_sums_distinct(folded[i].members(), folded[j].members(), caps,
                                     "line product equality"))
        report.product_equality = false;
    }
  }

  // (b) Cauchy-Schwarz chain per family, plus the measured exponent
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& fam = sorted[i];
    MomentEmbedding pk = moment_embed(fam.admissible, k);
    VectorSet upik = moment_sumset(pk, u, caps);
    Int j_u = rep_table(pk, u, caps).sum_of_squares();
    Int p_pow = int_pow(Int(static_cast<unsigned long>(fam.admissible.size())),
                        static_cast<unsigned long>(2 * u));
    if (Int(static_cast<unsigned long>(upik.size())) * j_u < p_pow) report.cs_chain = false;
    if (fam.line.size() >= 2) {
      report.exponents.push_back(log10_int(Int(static_cast<unsigned long>(folded[i].size()))) /
                                 log10_int(Int(static_cast<unsigned long>(fam.line.size()))));
    } else {
      report.exponents.push_back(0.0);
    }
  }

  // (c) consecutive-pair sumsets pairwise disjoint
  std::unordered_set<PowerSumKey, PowerSumKeyHash> seen;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    auto block = detail::pair_sumset(folded[i].members(), folded[i + 1].members(), caps,
                                     "line disjointness");
    for (auto& key : block) {
      if (!seen.insert(key).second) {
        report.consecutive_disjoint = false;
        break;
      }
    }
    if (!report.consecutive_disjoint) break;
  }
  return report;
}

SumProductReport vmvtsp_report(const GroundSet& a, int s, int k, const Rat& epsilon,
                               std::optional<int> u_opt, const Caps& caps) {
  if (k < 2 || s < k || s > k * (k + 1) / 2)
    throw std::invalid_argument("vmvtsp_report needs 2 <= k <= s <= k(k+1)/2");
  if (a.contains_zero()) throw ZeroElement();
  int u = u_opt.value_or(s);

  SumProductReport report;
  report.s = s;
  report.k = k;
  report.u = u;
  report.epsilon = epsilon;

  // Work on a single-signed copy; negating preserves quotient multiplicities
  // and all moment sumset sizes (coordinatewise sign flips are bijections).
  GroundSet working = sign_split(a);
  bool negated = false;
  if (working.at(0) < 0) {
    std::vector<Int> flipped;
    for (const auto& v : working.elements()) flipped.push_back(-v);
    working = make_ground_set(std::move(flipped));
    negated = true;
  }
  report.sign_branch =
      negated ? "negative-negated" : (working.size() == a.size() ? "all-positive" : "positive");
  report.working_size = Int(static_cast<unsigned long>(working.size()));
  Int n(report.working_size);

  QuotientStats q = quotient_counts(working, caps);
  report.quotient_support = q.support;
  report.mult_energy = q.multiplicative_energy;
  report.chain_quotient_energy = q.support * q.multiplicative_energy >= int_pow(n, 4);

  LevelSelection level = dyadic_level_select(q, working.size());
  report.level = level.level;
  report.level_families = Int(static_cast<unsigned long>(level.quotients.size()));
  report.level_mass = level.mass;
  report.chain_pigeonhole = level.level_count * level.mass >= q.multiplicative_energy;
  report.chain_level_cap =
      level.mass <= report.level_families * (Int(1) << (2 * level.level + 2));

  std::vector<LineFamily> families;
  families.reserve(level.quotients.size());
  for (const auto& quot : level.quotients) families.push_back(build_line_family(working, k, quot, caps));

  LineLemmaReport lemmas = check_line_lemmas(working, k, u, families, caps);
  report.chain_line_product = lemmas.product_equality;
  report.chain_line_disjoint = lemmas.consecutive_disjoint;
  report.chain_line_cs = lemmas.cs_chain;

  MomentEmbedding embedding = moment_embed(working, k);
  VectorSet two_u = moment_sumset(embedding, 2 * u, caps);
  report.sumset_2u = Int(static_cast<unsigned long>(two_u.size()));

  // |uA + uA|^2 >= sum of the consecutive-pair block sizes (containment plus
  // disjointness)
  {
    Int total = 0;
    std::vector<VectorSet> folded;
    for (const auto& fam : families) folded.push_back(fold_sumset(fam.line, u, caps));
    for (std::size_t i = 0; i + 1 < folded.size(); ++i)
      total += detail::pair_sumset_size(folded[i].members(), folded[i + 1].members(), caps,
                                        "assembled bound");
    report.chain_assembled = report.sumset_2u * report.sumset_2u >= total;
  }

  report.lhs_log10 = Rat(Rat(2 * s) - 2 * epsilon).get_d() * log10_int(n);
  report.rhs_log10 =
      log10_int(report.sumset_2u) +
      Rat(Rat(s) - Rat(1, 2) - epsilon).get_d() * log10_int(report.quotient_support);
  report.measured_constant = std::pow(10.0, report.lhs_log10 - report.rhs_log10);

  report.delta_s = Rat(1) / (Rat(2 * s - 1) - 2 * epsilon);
  report.quotient_branch_done =
      compare_power_product(Rat(report.quotient_support), {{Rat(n), Rat(1) + report.delta_s}}) >= 0;

  // 2^I >= sqrt(N)/(8 log N): only forced on the contradiction branch,
  // recorded with natural log as in the source chain.
  {
    double lhs = std::pow(2.0, level.level);
    double rhs = std::sqrt(n.get_d()) / (8.0 * std::log(n.get_d()));
    report.dyadic_floor_holds = working.size() >= 2 && lhs >= rhs;
  }
  return report;
}

double lambda_empirical(const GroundSet& a, int s, int k, const Caps& caps) {
  if (2 * s < k * (k + 1)) throw std::invalid_argument("lambda_empirical needs 2s >= k(k+1)");
  if (a.size() < 2) throw std::invalid_argument("lambda_empirical needs N >= 2");
  VinogradovStats stats = vinogradov_count(a, s, k, caps);
  return stats.lambda_emp;
}

AbsMainReport absmain_report(const GroundSet& a, int s, int k, const Rat& lambda_assumed, int l,
                             int b, const Caps& caps) {
  if (a.contains_zero()) throw ZeroElement();
  if (l < 1 || b < 1) throw std::invalid_argument("absmain_report needs l, b >= 1");
  AbsMainReport report;
  VinogradovStats stats = vinogradov_count(a, s, k, caps);
  report.j = stats.j;
  Int n(static_cast<unsigned long>(a.size()));
  double log_n = a.size() >= 2 ? log10_int(n) : 0.0;
  double exponent = 2.0 * s - 0.5 * k * (k + 1) + lambda_assumed.get_d();
  report.alpha_abs_log10 = log10_int(stats.j) - exponent * log_n;
  double scale = (k * (k + 1) - 2.0 * lambda_assumed.get_d()) / 43200.0;
  if (a.size() >= 2 && report.alpha_abs_log10 < 0 && scale > 0)
    report.hyp_eps_min = -report.alpha_abs_log10 / (scale * log_n);

  report.lfold_sumset =
      Int(static_cast<unsigned long>(iterated_sum_difference(a, l, 0, caps).size()));
  report.lfold_product = Int(static_cast<unsigned long>(product_set(a, l, caps).size()));
  report.product = Int(static_cast<unsigned long>(product_set(a, 2, caps).size()));

  Int n_pow_b = int_pow(n, static_cast<unsigned long>(b));
  report.dichotomy_holds = report.lfold_product > n_pow_b || report.lfold_sumset > n_pow_b;

  // (|AA|/|A|)^l >= |A^{(l)}|/|A|, cross-multiplied
  report.plunnecke_chain =
      int_pow(report.product, static_cast<unsigned long>(l)) >=
      report.lfold_product * int_pow(n, static_cast<unsigned long>(l - 1));
  return report;
}

}  // namespace vinolab
