// Acceptance runner: each criterion prints one [PASS]/[FAIL] line; the
// process exits nonzero if any criterion fails. Expected values are
// recomputed by independent in-test oracles before being asserted.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vinolab/extraction.hpp"
#include "vinolab/json_io.hpp"
#include "vinolab/rng.hpp"
#include "vinolab/suites.hpp"
#include "vinolab/sumproduct.hpp"

using namespace vinolab;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& details) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              details.empty() ? "" : " -- ", details.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

GroundSet interval(long n) {
  std::vector<Int> raw;
  for (long v = 1; v <= n; ++v) raw.emplace_back(v);
  return make_ground_set(std::move(raw));
}

GroundSet random_positive_set(SplitMix64& rng, std::size_t max_size, std::uint64_t range_hi) {
  FamilySpec spec;
  spec.family = Family::RandomSubset;
  spec.range_lo = 1;
  spec.range_hi = Int(range_hi);
  spec.cardinality = 1 + rng.next_below(max_size);
  spec.seed = rng.next();
  return generate(spec);
}

// ---- criterion 1: meet-in-the-middle equals the literal oracle ----------
void criterion_oracle_equivalence() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(1001);
  bool ok = true;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    GroundSet a = random_positive_set(rng, 8, 64);
    for (int s = 1; s <= 3 && ok; ++s)
      for (int k = 1; k <= 2 && ok; ++k)
        ok = vinogradov_count(a, s, k).j == vinogradov_count_naive(a, s, k);
  }
  double elapsed = seconds_since(start);
  report(1, "oracle equivalence on 50 random sets", ok && elapsed < 30.0,
         "elapsed " + format_float(elapsed) + "s");
}

// ---- criterion 2: pinned values, oracle recomputed in-test --------------
Int brute_j(const std::vector<long>& a, int s, int k) {
  // literal tuple-pair enumeration, independent of the library
  std::size_t n = a.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(2 * s), 0);
  Int count = 0;
  for (;;) {
    bool match = true;
    for (int j = 1; j <= k && match; ++j) {
      long long left = 0, right = 0;
      for (int i = 0; i < s; ++i) {
        long long px = 1, py = 1;
        for (int p = 0; p < j; ++p) {
          px *= a[idx[static_cast<std::size_t>(i)]];
          py *= a[idx[static_cast<std::size_t>(s + i)]];
        }
        left += px;
        right += py;
      }
      match = left == right;
    }
    if (match) ++count;
    std::size_t pos = idx.size();
    while (pos > 0) {
      if (++idx[pos - 1] < n) break;
      idx[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return count;
}

void criterion_pinned_values() {
  bool ok = true;
  std::string why;

  Int j21 = brute_j({0, 1, 2}, 2, 1);
  ok &= j21 == 19 && vinogradov_count(make_ground_set({0, 1, 2}), 2, 1).j == j21;
  if (j21 != 19) why += " J21";

  Int j32 = brute_j({1, 2, 3}, 3, 2);
  ok &= j32 == 93 && vinogradov_count(make_ground_set({1, 2, 3}), 3, 2).j == j32;
  if (j32 != 93) why += " J32";

  // E(AP8) by the quadruple definition
  long long e_oracle = 0;
  for (int x1 = 0; x1 < 8; ++x1)
    for (int y1 = 0; y1 < 8; ++y1)
      for (int x2 = 0; x2 < 8; ++x2)
        for (int y2 = 0; y2 < 8; ++y2)
          if (x1 + y1 == x2 + y2) ++e_oracle;
  std::vector<PowerSumKey> ap8;
  for (long v = 0; v < 8; ++v) ap8.push_back(PowerSumKey({Int(v)}));
  ok &= e_oracle == 344 && additive_energy(ap8, ap8) == Int(static_cast<long>(e_oracle));
  if (e_oracle != 344) why += " E";

  // |A/A| and M for {1,2,4} over the 9 ordered pairs
  std::vector<long> a124{1, 2, 4};
  std::map<Rat, int> d_oracle;
  for (long x : a124)
    for (long y : a124) {
      Rat q(x, y);
      q.canonicalize();
      d_oracle[q] += 1;
    }
  long long m_oracle = 0;
  for (const auto& [q, d] : d_oracle) m_oracle += static_cast<long long>(d) * d;
  QuotientStats qs = quotient_counts(make_ground_set({1, 2, 4}));
  ok &= d_oracle.size() == 5 && m_oracle == 19;
  ok &= qs.support == Int(static_cast<unsigned long>(d_oracle.size())) &&
        qs.multiplicative_energy == Int(static_cast<long>(m_oracle));
  if (d_oracle.size() != 5 || m_oracle != 19) why += " quotient";

  // |2A| for {1,2,3}, k = 2, over the 9 pairs
  std::set<std::pair<long, long>> sum_oracle;
  for (long x : {1, 2, 3})
    for (long y : {1, 2, 3}) sum_oracle.insert({x + y, x * x + y * y});
  ok &= sum_oracle.size() == 6;
  ok &= moment_sumset(moment_embed(make_ground_set({1, 2, 3}), 2), 2).size() == sum_oracle.size();
  if (sum_oracle.size() != 6) why += " sumset";

  report(2, "pinned values recomputed by naive oracles", ok, why.empty() ? "" : "mismatch:" + why);
}

// ---- criterion 3: exact inequality suite ---------------------------------
void criterion_inequalities() {
  SplitMix64 rng(1003);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    GroundSet a = random_positive_set(rng, 16, 400);
    Int n(static_cast<unsigned long>(a.size()));
    for (auto [s, k] : {std::pair{2, 1}, std::pair{3, 2}}) {
      VinogradovStats stats = vinogradov_count(a, s, k);
      Int n_s = int_pow(n, static_cast<unsigned long>(s));
      if (!(stats.j >= n_s)) ++failures;
      if (!(stats.j * stats.sumset_size >= n_s * n_s)) ++failures;
    }
    QuotientStats q = quotient_counts(a);
    if (!(q.support * q.multiplicative_energy >= int_pow(n, 4))) ++failures;
    LevelSelection level = dyadic_level_select(q, a.size());
    if (!(level.level_count * level.mass >= q.multiplicative_energy)) ++failures;
    if (!(level.mass <= Int(static_cast<unsigned long>(level.quotients.size())) *
                            (Int(1) << (2 * level.level + 2))))
      ++failures;
    if (!plunnecke_check(a, 2, 1).pass) ++failures;
  }
  report(3, "exact inequalities on 100 random sets", failures == 0,
         failures == 0 ? "" : std::to_string(failures) + " violations");
}

// ---- criterion 4: growth exponent of J over intervals --------------------
void criterion_exponent_trend() {
  auto start = std::chrono::steady_clock::now();
  std::vector<double> xs, ys;
  for (long n : {16, 24, 32, 48}) {
    VinogradovStats stats = vinogradov_count(interval(n), 3, 2);
    xs.push_back(static_cast<double>(n));
    ys.push_back(stats.j.get_d());
  }
  double slope = loglog_slope(xs, ys);
  double elapsed = seconds_since(start);
  bool ok = slope >= 3.2 && slope <= 3.8 && elapsed < 120.0;
  report(4, "log-log growth of J on intervals", ok,
         "slope " + format_float(slope) + ", elapsed " + format_float(elapsed) + "s");
}

// ---- criterion 5: line lemmas at the selected dyadic level ---------------
void criterion_line_lemmas() {
  GroundSet twelve = interval(12);
  QuotientStats q = quotient_counts(twelve);
  LevelSelection level = dyadic_level_select(q, twelve.size());
  std::vector<LineFamily> families;
  for (const auto& quot : level.quotients) families.push_back(build_line_family(twelve, 2, quot));
  int failures = 0;
  for (int u : {1, 2}) {
    LineLemmaReport r = check_line_lemmas(twelve, 2, u, families);
    if (!r.product_equality) ++failures;
    if (!r.consecutive_disjoint) ++failures;
  }
  report(5, "line lemmas exact at the selected level", failures == 0,
         "families " + std::to_string(families.size()));
}

// ---- criterion 6: extraction pipeline end to end -------------------------
void criterion_pipeline() {
  auto start = std::chrono::steady_clock::now();
  PipelineParams params;
  params.s = 6;
  params.k = 2;
  params.epsilon = Rat(1, 10);
  params.delta = Rat(1, 100);
  params.l_list = {2};
  GroundSet a = interval(16);
  ExtractionTrace trace = run_pipeline(a, params);
  std::string bytes = dump_canonical(trace_to_json(trace));
  ExtractionTrace rerun = run_pipeline(a, params);
  std::string rebytes = dump_canonical(trace_to_json(rerun));
  double elapsed = seconds_since(start);

  bool ok = trace.completed();
  ok &= trace.all_asserts_hold();
  ok &= trace.a_prime.has_value() && trace.a_prime->size() >= 1;
  ok &= trace.certifications.size() == 1 && trace.certifications[0].l == 2 &&
        trace.certifications[0].lfold_size >= 1;
  ok &= bytes == rebytes;
  ok &= elapsed < 120.0;
  std::string details = "elapsed " + format_float(elapsed) + "s";
  if (trace.a_prime)
    details += ", |A'| = " + std::to_string(trace.a_prime->size()) + ", |2A'| = " +
               (trace.certifications.empty() ? std::string("?")
                                             : to_decimal(trace.certifications[0].lfold_size));
  report(6, "extraction pipeline on the 16-point interval", ok, details);
}

// ---- criterion 7: the BSG subroutine -------------------------------------
void criterion_bsg() {
  bool ok = true;
  std::string why;

  long long e_oracle = 0;
  for (int x1 = 0; x1 < 8; ++x1)
    for (int y1 = 0; y1 < 8; ++y1)
      for (int x2 = 0; x2 < 8; ++x2)
        for (int y2 = 0; y2 < 8; ++y2)
          if (x1 + y1 == x2 + y2) ++e_oracle;
  if (e_oracle != 344) {
    ok = false;
    why += " energy-oracle";
  }

  std::vector<Int> raw;
  for (long v = 0; v < 8; ++v) raw.emplace_back(v);
  VectorSet ap8 = VectorSet::from_integers(raw);
  BsgResult res = bsg_extract(ap8, ap8, Rat(344, 512), Rat(7, 10));
  if (!res.cert.pipeline_form_holds) {
    ok = false;
    why += " ap8-cert";
  }

  SplitMix64 rng(1007);
  for (int trial = 0; trial < 10; ++trial) {
    GroundSet a = random_positive_set(rng, 10, 60);
    VectorSet z = VectorSet::from_integers(a.elements());
    Int e = additive_energy(z.members(), z.members());
    Rat alpha(e, int_pow(Int(static_cast<unsigned long>(z.size())), 3));
    alpha.canonicalize();
    BsgResult returned = bsg_extract(z, z, alpha, Rat(7, 10));
    auto exhaustive = bsg_exhaustive_best(z, alpha, Rat(7, 10));
    if (exhaustive && exhaustive->cert.score() > returned.cert.score()) {
      ok = false;
      why += " fallback-better@" + std::to_string(trial);
    }
  }
  report(7, "bsg extraction and exhaustive fallback", ok, why.empty() ? "" : "failed:" + why);
}

// ---- criterion 8: sum-product dashboards ----------------------------------
void criterion_sumproduct() {
  bool ok = true;
  std::string why;
  auto full_chain = [](const SumProductReport& r) {
    return r.chain_quotient_energy && r.chain_pigeonhole && r.chain_level_cap &&
           r.chain_line_product && r.chain_line_disjoint && r.chain_line_cs && r.chain_assembled;
  };

  SumProductReport ap = vmvtsp_report(interval(16), 3, 2, Rat(1, 10));
  if (!full_chain(ap)) {
    ok = false;
    why += " interval-chain";
  }
  if (!(std::isfinite(ap.lhs_log10) && std::isfinite(ap.rhs_log10) &&
        ap.measured_constant > 0.0)) {
    ok = false;
    why += " interval-sides";
  }

  std::vector<Int> gp_raw;
  Int v = 1;
  for (int i = 0; i < 16; ++i, v *= 2) gp_raw.push_back(v);
  GroundSet gp = make_ground_set(std::move(gp_raw));
  SumProductReport gpr = vmvtsp_report(gp, 3, 2, Rat(1, 10));
  if (!full_chain(gpr)) {
    ok = false;
    why += " gp-chain";
  }
  if (gpr.quotient_support != Int(31)) {
    ok = false;
    why += " gp-quotients";
  }
  report(8, "sum-product dashboards", ok, why.empty() ? "" : "failed:" + why);
}

// ---- criterion 9: CLI exit codes ------------------------------------------
int run_cli(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

void criterion_cli(const std::string& cli) {
  if (cli.empty()) {
    report(9, "cli contract", false, "no --cli path given");
    return;
  }
  bool ok = true;
  std::string why;

  int verify = run_cli(cli + " verify --suite core --seed 42 > acceptance_cli_verify.txt 2>&1");
  if (verify != 0) {
    ok = false;
    why += " verify=" + std::to_string(verify);
  }

  write_text_file("acceptance_bad_set.json", "{\"elements\": [1.5, \"x\"]}");
  int malformed =
      run_cli(cli + " count j --set acceptance_bad_set.json --s 2 --k 1 > /dev/null 2>&1");
  if (malformed != 2) {
    ok = false;
    why += " malformed=" + std::to_string(malformed);
  }

  write_set_file("acceptance_set32.json", interval(32));
  int capped = run_cli(cli +
                       " count j --set acceptance_set32.json --s 3 --k 2 --cap 10 > /dev/null 2>&1");
  if (capped != 3) {
    ok = false;
    why += " capped=" + std::to_string(capped);
  }

  int env_capped = run_cli("VINOLAB_CAP=10 " + cli +
                           " count j --set acceptance_set32.json --s 3 --k 2 > /dev/null 2>&1");
  if (env_capped != 3) {
    ok = false;
    why += " env_capped=" + std::to_string(env_capped);
  }

  std::remove("acceptance_bad_set.json");
  std::remove("acceptance_set32.json");
  std::remove("acceptance_cli_verify.txt");
  report(9, "cli contract (exit codes 0/2/3)", ok, why.empty() ? "" : "got:" + why);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  criterion_oracle_equivalence();
  criterion_pinned_values();
  criterion_inequalities();
  criterion_exponent_trend();
  criterion_line_lemmas();
  criterion_pipeline();
  criterion_bsg();
  criterion_sumproduct();
  criterion_cli(cli);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
