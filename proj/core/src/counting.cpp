#include "vinolab/counting.hpp"

#include <algorithm>
#include <cmath>

#include "vinolab/detail/kernels.hpp"

namespace vinolab {

Int RepTable::count_of(const PowerSumKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? Int(0) : it->second;
}

Int RepTable::sum_of_squares() const {
  Int acc = 0;
  for (const auto& [key, c] : entries_) acc += c * c;
  return acc;
}

Int RepTable::max_count() const {
  Int best = 0;
  for (const auto& [key, c] : entries_)
    if (c > best) best = c;
  return best;
}

std::vector<const PowerSumKey*> RepTable::sorted_keys() const {
  std::vector<const PowerSumKey*> keys;
  keys.reserve(entries_.size());
  for (const auto& [key, c] : entries_) keys.push_back(&key);
  std::sort(keys.begin(), keys.end(),
            [](const PowerSumKey* a, const PowerSumKey* b) { return *a < *b; });
  return keys;
}

RepTable rep_table(const MomentEmbedding& embedding, int arity, const Caps& caps) {
  if (arity < 1) throw std::invalid_argument("rep_table: arity must be >= 1");
  RepTable out;
  out.degree_ = embedding.degree();
  out.arity_ = arity;
  for (const auto& p : embedding.points()) out.entries_[p.coords] = 1;
  for (int step = 1; step < arity; ++step) {
    check_iteration_cap(static_cast<double>(out.entries_.size()) *
                            static_cast<double>(embedding.size()),
                        caps, "rep_table convolution");
    RepTable::Map next;
    next.reserve(out.entries_.size() * 2);
    for (const auto& [key, c] : out.entries_) {
      for (const auto& p : embedding.points()) {
        next[key + p.coords] += c;
        check_table_cap(next.size(), caps, "rep_table");
      }
    }
    out.entries_ = std::move(next);
  }
  out.total_ = int_pow(Int(static_cast<unsigned long>(embedding.size())),
                       static_cast<unsigned long>(arity));
  return out;
}

RepTable rep_table(const GroundSet& a, int k, int s, const Caps& caps) {
  return rep_table(moment_embed(a, k), s, caps);
}

VinogradovStats vinogradov_count(const GroundSet& a, int s, int k, const Caps& caps) {
  RepTable table = rep_table(a, k, s, caps);
  VinogradovStats stats;
  stats.s = s;
  stats.k = k;
  stats.n_elements = Int(static_cast<unsigned long>(a.size()));
  stats.j = table.sum_of_squares();
  stats.rep_sup = table.max_count();
  stats.diagonal = diagonal_count(a, s, caps);
  stats.sumset_size = Int(static_cast<unsigned long>(table.support_size()));
  int kk1 = k * (k + 1);
  if (2 * s >= kk1) {
    Rat alpha(stats.j, int_pow(stats.n_elements, static_cast<unsigned long>(2 * s - kk1 / 2)));
    alpha.canonicalize();
    stats.alpha = alpha;
  }
  if (a.size() >= 2) {
    double excess = log10_int(stats.j) / log10_int(stats.n_elements) -
                    (2.0 * s - 0.5 * kk1);
    stats.lambda_emp = std::max(0.0, excess);
  }
  return stats;
}

Int vinogradov_count_naive(const GroundSet& a, int s, int k, const Caps& caps) {
  const std::size_t n = a.size();
  double tuples = std::pow(static_cast<double>(n), s);
  check_iteration_cap(tuples * tuples, caps, "vinogradov_count_naive");

  // Power cache: powers[i][j] = a_i^{j+1}.
  std::vector<std::vector<Int>> powers(n, std::vector<Int>(static_cast<std::size_t>(k)));
  for (std::size_t i = 0; i < n; ++i) {
    Int p = 1;
    for (int j = 0; j < k; ++j) {
      p *= a.at(i);
      powers[i][static_cast<std::size_t>(j)] = p;
    }
  }

  std::vector<std::size_t> x(static_cast<std::size_t>(s), 0);
  std::vector<std::size_t> y(static_cast<std::size_t>(s), 0);
  std::vector<Int> sx(static_cast<std::size_t>(k));
  std::vector<Int> sy(static_cast<std::size_t>(k));
  auto power_sums = [&](const std::vector<std::size_t>& idx, std::vector<Int>& out) {
    for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = 0;
    for (std::size_t i : idx)
      for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] += powers[i][static_cast<std::size_t>(j)];
  };
  auto advance = [&](std::vector<std::size_t>& idx) {
    for (std::size_t pos = idx.size(); pos-- > 0;) {
      if (++idx[pos] < n) return true;
      idx[pos] = 0;
    }
    return false;
  };

  Int count = 0;
  do {
    power_sums(x, sx);
    std::fill(y.begin(), y.end(), 0);
    do {
      power_sums(y, sy);
      bool match = true;
      for (int j = 0; j < k && match; ++j)
        match = (sx[static_cast<std::size_t>(j)] == sy[static_cast<std::size_t>(j)]);
      if (match) ++count;
    } while (advance(y));
  } while (advance(x));
  return count;
}

namespace {

Int factorial(int n) {
  Int out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

Int diagonal_count(const GroundSet& a, int s, const Caps& caps) {
  // Multisets enumerated as (element index, multiplicity) runs.
  const std::size_t n = a.size();
  Int s_fact = factorial(s);
  Int acc = 0;
  std::uint64_t visited = 0;

  // stack of (next index, remaining, denom)
  struct Frame {
    std::size_t idx;
    int remaining;
    Int denom;
  };
  std::vector<Frame> stack;
  stack.push_back({0, s, Int(1)});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.remaining == 0) {
      Int perms = s_fact / f.denom;
      acc += perms * perms;
      continue;
    }
    if (f.idx >= n) continue;
    if (++visited > caps.iterations) throw ResourceLimit("diagonal_count multiset enumeration");
    // skip element idx entirely
    stack.push_back({f.idx + 1, f.remaining, f.denom});
    // take m >= 1 copies of element idx
    Int mult_fact = 1;
    for (int m = 1; m <= f.remaining; ++m) {
      mult_fact *= m;
      stack.push_back({f.idx + 1, f.remaining - m, f.denom * mult_fact});
    }
  }
  return acc;
}

Int additive_energy(const std::vector<PowerSumKey>& x, const std::vector<PowerSumKey>& y,
                    const Caps& caps) {
  if (x.empty() || y.empty()) return 0;
  std::size_t dim = x.front().dimension();
  for (const auto& k : x)
    if (k.dimension() != dim) throw DimensionMismatch();
  for (const auto& k : y)
    if (k.dimension() != dim) throw DimensionMismatch();
  return detail::pair_energy(x, y, caps, "additive_energy");
}

QuotientStats quotient_counts(const GroundSet& a, const Caps& caps) {
  if (a.contains_zero()) throw ZeroElement();
  check_iteration_cap(static_cast<double>(a.size()) * static_cast<double>(a.size()), caps,
                      "quotient_counts");
  QuotientStats out;
  for (const auto& a1 : a.elements()) {
    for (const auto& a2 : a.elements()) {
      Rat q(a1, a2);
      q.canonicalize();
      out.d_table[q] += 1;
    }
  }
  for (const auto& [q, d] : out.d_table) out.multiplicative_energy += d * d;
  out.support = Int(static_cast<unsigned long>(out.d_table.size()));
  return out;
}

LowerBoundReport lower_bound_check(const GroundSet& a, int s, int k, const Caps& caps) {
  VinogradovStats stats = vinogradov_count(a, s, k, caps);
  LowerBoundReport report;
  report.j = stats.j;
  report.n_pow_s = int_pow(stats.n_elements, static_cast<unsigned long>(s));
  Int n2s = report.n_pow_s * report.n_pow_s;
  Int q, r;
  mpz_cdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n2s.get_mpz_t(), stats.sumset_size.get_mpz_t());
  report.ratio_floor = q;
  report.pass = (report.j >= report.n_pow_s) && (report.j * stats.sumset_size >= n2s);
  return report;
}

DiameterBoundReport diameter_bound_check(const GroundSet& a, int s, int k, const Rat& eps,
                                         const Caps& caps) {
  VinogradovStats stats = vinogradov_count(a, s, k, caps);
  DiameterBoundReport report;
  report.j = stats.j;
  report.eps = eps;
  Int n = stats.n_elements;
  int kk1 = k * (k + 1);
  Rat base = rat_pow(Rat(n), s) + rat_pow(Rat(n), 2 * s - kk1 / 2);
  Int x = a.diameter();
  Rat x_eff = x > 1 ? Rat(x) : Rat(1);  // diameter 0/1: the eps factor is 1
  report.holds = compare_power_product(Rat(stats.j), {{base, Rat(1)}, {x_eff, eps}}) <= 0;
  if (x > 1) {
    double excess = log10_int(stats.j) - log10_rat(base);
    report.eps_min = std::max(0.0, excess / log10_int(x));
  } else {
    report.eps_min = 0.0;
  }
  return report;
}

double rep_sup_excess(const VinogradovStats& stats) {
  if (stats.n_elements < 2) return 0.0;
  double logn = log10_int(stats.n_elements);
  double excess =
      log10_int(stats.rep_sup) / logn - (stats.s - 0.5 * stats.k * (stats.k + 1));
  return std::max(0.0, excess);
}

}  // namespace vinolab
