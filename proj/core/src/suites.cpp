#include "vinolab/suites.hpp"

#include <algorithm>

#include "vinolab/detail/kernels.hpp"
#include "vinolab/extraction.hpp"
#include "vinolab/rng.hpp"
#include "vinolab/sumproduct.hpp"

namespace vinolab {

namespace {

GroundSet random_set(SplitMix64& rng, std::size_t max_size, std::uint64_t range_hi) {
  std::size_t size = 1 + rng.next_below(max_size);
  FamilySpec spec;
  spec.family = Family::RandomSubset;
  spec.range_lo = 1;
  spec.range_hi = Int(range_hi);
  spec.cardinality = size;
  spec.seed = rng.next();
  return generate(spec);
}

Int binomial(std::size_t n, std::size_t k) {
  Int out = 1;
  for (std::size_t i = 0; i < k; ++i) {
    out *= Int(static_cast<unsigned long>(n - i));
    out /= Int(static_cast<unsigned long>(i + 1));
  }
  return out;
}

class Checks {
public:
  explicit Checks(SuiteResult& result) : result_(result) {}

  void flag(const std::string& name, bool pass, const std::string& details = "") {
    result_.checks.push_back({name, pass ? "pass" : "fail", details});
  }
  void recorded(const std::string& name, const std::string& details) {
    result_.checks.push_back({name, "recorded", details});
  }

private:
  SuiteResult& result_;
};

void suite_core(SuiteResult& result, const ExperimentConfig& config) {
  Checks checks(result);
  SplitMix64 rng(config.seed);
  const Caps& caps = config.caps;

  bool identities = true, oracle_match = true, lower_bounds = true, energy_match = true;
  for (int trial = 0; trial < 10; ++trial) {
    GroundSet a = random_set(rng, 8, 60);
    Int n(static_cast<unsigned long>(a.size()));
    for (auto [s, k] : {std::pair{2, 1}, std::pair{3, 2}}) {
      RepTable table = rep_table(a, k, s, caps);
      VinogradovStats stats = vinogradov_count(a, s, k, caps);
      Int total = 0;
      for (const auto& [key, c] : table.entries()) total += c;
      identities &= total == table.total();
      identities &= table.total() == int_pow(n, static_cast<unsigned long>(s));
      identities &= table.sum_of_squares() == stats.j;
      identities &= table.max_count() == stats.rep_sup;
      identities &= stats.j >= stats.diagonal && stats.diagonal >= int_pow(n, static_cast<unsigned long>(s));
      oracle_match &= stats.j == vinogradov_count_naive(a, s, k, caps);
      LowerBoundReport lb = lower_bound_check(a, s, k, caps);
      lower_bounds &= lb.pass;
    }
    VectorSet ones = VectorSet::from_integers(a.elements());
    energy_match &= additive_energy(ones.members(), ones.members(), caps) ==
                    vinogradov_count(a, 2, 1, caps).j;
  }
  checks.flag("rep_table_identities", identities);
  checks.flag("convolution_equals_naive", oracle_match);
  checks.flag("diagonal_and_cauchy_schwarz_bounds", lower_bounds);
  checks.flag("energy_equals_J21", energy_match);

  bool quotient_ok = true, plunnecke_ok = true, ratio_ok = true, sumset_ok = true;
  bool spaced_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    GroundSet a = random_set(rng, 12, 300);
    Int n(static_cast<unsigned long>(a.size()));
    QuotientStats q = quotient_counts(a, caps);
    Int dsum = 0;
    bool in_range = true;
    for (const auto& [quot, d] : q.d_table) {
      dsum += d;
      in_range &= d >= 1 && d <= n;
    }
    quotient_ok &= dsum == n * n && in_range;
    quotient_ok &= q.support * q.multiplicative_energy >= int_pow(n, 4);

    for (auto [m, nn] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}})
      plunnecke_ok &= plunnecke_check(a, m, nn, caps).pass;

    Int aa(static_cast<unsigned long>(product_set(a, 2, caps).size()));
    Int qq(static_cast<unsigned long>(quotient_set(a, caps).size()));
    ratio_ok &= qq * n <= aa * aa;

    MomentEmbedding e = moment_embed(a, 2);
    for (int l : {1, 2, 3}) {
      VectorSet ms = moment_sumset(e, l, caps);
      sumset_ok &= Int(static_cast<unsigned long>(ms.size())) <=
                   binomial(a.size() + static_cast<std::size_t>(l) - 1,
                            static_cast<std::size_t>(l));
      sumset_ok &= ms.size() >= a.size();
    }
    auto full = TupleGraph::complete(std::make_shared<MomentEmbedding>(e), 2, caps);
    sumset_ok &= restricted_sumset(full, caps).members() == moment_sumset(e, 2, caps).members();

    spaced_ok &= well_spaced_literal(a, caps);
  }
  checks.flag("quotient_identities", quotient_ok);
  checks.flag("plunnecke_ruzsa", plunnecke_ok);
  checks.flag("quotient_vs_product_ratio", ratio_ok);
  checks.flag("sumset_bounds_and_restricted_identity", sumset_ok);
  checks.flag("well_spaced_literal", spaced_ok);

  FamilySpec spec;
  spec.family = Family::RandomSubset;
  spec.range_lo = 1;
  spec.range_hi = 1000;
  spec.cardinality = 10;
  spec.seed = config.seed;
  checks.flag("generate_deterministic",
              generate(spec).elements() == generate(spec).elements());
}

void suite_oracle(SuiteResult& result, const ExperimentConfig& config) {
  Checks checks(result);
  SplitMix64 rng(config.seed);
  const Caps& caps = config.caps;

  bool oracle_match = true;
  for (int trial = 0; trial < 50; ++trial) {
    GroundSet a = random_set(rng, 8, 50);
    for (int s = 1; s <= 3; ++s)
      for (int k = 1; k <= 2; ++k)
        oracle_match &= vinogradov_count(a, s, k, caps).j == vinogradov_count_naive(a, s, k, caps);
  }
  checks.flag("meet_in_the_middle_equals_naive_50_sets", oracle_match);

  int holds = 0, total = 0;
  double worst_eps = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    GroundSet a = random_set(rng, 10, 200);
    DiameterBoundReport report = diameter_bound_check(a, 3, 2, Rat(1, 2), caps);
    ++total;
    if (report.holds) ++holds;
    worst_eps = std::max(worst_eps, report.eps_min);
  }
  checks.recorded("diameter_upper_bound_eps_half",
                  std::to_string(holds) + "/" + std::to_string(total) +
                      " hold; minimal eps <= " + format_float(worst_eps));

  GroundSet interval = generate(FamilySpec{Family::Arithmetic, 1, 1, 2, 0, 0, 12, 0, {}});
  VinogradovStats stats = vinogradov_count(interval, 3, 2, caps);
  // the representation-function excess is meaningful in the s >= k(k+1) regime
  VinogradovStats deep = vinogradov_count(interval, 6, 2, caps);
  checks.recorded("excess_exponents_interval_12",
                  "lambda_emp(s=3)=" + format_float(stats.lambda_emp) +
                      " rep_sup_excess(s=6)=" + format_float(rep_sup_excess(deep)));
}

void suite_extraction(SuiteResult& result, const ExperimentConfig& config) {
  Checks checks(result);
  const Caps& caps = config.caps;

  PipelineParams params;
  params.s = 6;
  params.k = 2;
  params.epsilon = Rat(1, 10);
  params.delta = Rat(1, 100);
  params.l_list = {2};

  GroundSet a = generate(FamilySpec{Family::Arithmetic, 1, 1, 2, 0, 0, 12, 0, {}});
  ExtractionTrace trace = run_pipeline(a, params, caps);
  checks.flag("pipeline_interval_12_completes", trace.completed());
  checks.flag("pipeline_interval_12_asserts", trace.all_asserts_hold());
  int conditional = 0, conditional_holds = 0;
  for (const auto& r : trace.records) {
    if (r.kind == "conditional") {
      ++conditional;
      if (r.holds) ++conditional_holds;
    }
  }
  checks.recorded("pipeline_interval_12_conditionals",
                  std::to_string(conditional_holds) + "/" + std::to_string(conditional) + " hold");
  ExtractionTrace again = run_pipeline(a, params, caps);
  checks.flag("pipeline_deterministic",
              dump_canonical(trace_to_json(trace)) == dump_canonical(trace_to_json(again)));

  GroundSet single = make_ground_set({Int(7)});
  PipelineParams sp = params;
  sp.s = 2;
  sp.k = 1;
  ExtractionTrace single_trace = run_pipeline(single, sp, caps);
  checks.flag("pipeline_singleton", single_trace.completed() && single_trace.all_asserts_hold());

  PipelineParams odd = params;
  odd.s = 7;
  GroundSet b = generate(FamilySpec{Family::Arithmetic, 1, 1, 2, 0, 0, 8, 0, {}});
  ExtractionTrace odd_trace = run_pipeline(b, odd, caps);
  checks.flag("pipeline_odd_arity", odd_trace.completed() && odd_trace.all_asserts_hold());

  SplitMix64 rng(config.seed);
  bool fallback_ok = true;
  for (int trial = 0; trial < 8; ++trial) {
    GroundSet z = random_set(rng, 8, 40);
    VectorSet zv = VectorSet::from_integers(z.elements());
    Int e = additive_energy(zv.members(), zv.members(), caps);
    Rat alpha(e, int_pow(Int(static_cast<unsigned long>(zv.size())), 3));
    alpha.canonicalize();
    BsgResult res = bsg_extract(zv, zv, alpha, Rat(7, 10), caps);
    auto exhaustive = bsg_exhaustive_best(zv, alpha, Rat(7, 10), caps);
    if (exhaustive && exhaustive->cert.score() > res.cert.score()) fallback_ok = false;
  }
  checks.flag("bsg_exhaustive_never_beats_returned", fallback_ok);
}

void suite_sumproduct(SuiteResult& result, const ExperimentConfig& config) {
  Checks checks(result);
  const Caps& caps = config.caps;

  GroundSet interval = generate(FamilySpec{Family::Arithmetic, 1, 1, 2, 0, 0, 12, 0, {}});
  SumProductReport r1 = vmvtsp_report(interval, 3, 2, Rat(1, 10), std::nullopt, caps);
  bool chain1 = r1.chain_quotient_energy && r1.chain_pigeonhole && r1.chain_level_cap &&
                r1.chain_line_product && r1.chain_line_disjoint && r1.chain_line_cs &&
                r1.chain_assembled;
  checks.flag("vmvtsp_interval_12_chain", chain1);
  checks.recorded("vmvtsp_interval_12_sides", "lhs_log10=" + format_float(r1.lhs_log10) +
                                                  " rhs_log10=" + format_float(r1.rhs_log10));

  GroundSet gp = generate(FamilySpec{Family::Geometric, 1, 1, 2, 0, 0, 10, 0, {}});
  SumProductReport r2 = vmvtsp_report(gp, 3, 2, Rat(1, 10), std::nullopt, caps);
  bool chain2 = r2.chain_quotient_energy && r2.chain_pigeonhole && r2.chain_level_cap &&
                r2.chain_line_product && r2.chain_line_disjoint && r2.chain_line_cs &&
                r2.chain_assembled;
  checks.flag("vmvtsp_gp_10_chain", chain2);
  checks.flag("gp_quotient_support_2n_minus_1",
              r2.quotient_support == Int(static_cast<unsigned long>(2 * gp.size() - 1)));

  checks.recorded("lambda_empirical",
                  "interval12=" + format_float(lambda_empirical(interval, 3, 2, caps)) +
                      " gp10=" + format_float(lambda_empirical(gp, 3, 2, caps)));

  GroundSet gp8 = generate(FamilySpec{Family::Geometric, 1, 1, 2, 0, 0, 8, 0, {}});
  AbsMainReport am = absmain_report(gp8, 6, 2, Rat(0), 3, 2, caps);
  checks.flag("absmain_plunnecke_chain", am.plunnecke_chain);
  checks.recorded("absmain_dichotomy", std::string("sup>N^b: ") +
                                           (am.dichotomy_holds ? "true" : "false"));
}

}  // namespace

SuiteResult run_suite(const std::string& name, const ExperimentConfig& config) {
  SuiteResult result;
  result.suite = name;
  if (name == "core")
    suite_core(result, config);
  else if (name == "oracle")
    suite_oracle(result, config);
  else if (name == "extraction")
    suite_extraction(result, config);
  else if (name == "sumproduct")
    suite_sumproduct(result, config);
  else
    throw ConfigError("unknown suite '" + name + "' (core, oracle, extraction, sumproduct)");
  return result;
}

Json suite_to_json(const SuiteResult& result) {
  Json checks = Json::array();
  for (const auto& c : result.checks)
    checks.push_back(Json{{"name", c.name}, {"status", c.status}, {"details", c.details}});
  return Json{{"suite", result.suite},
              {"checks", checks},
              {"exit_status", result.exit_status()}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "N,s,k,J,alpha_num,alpha_den,rep_sup\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.s) + "," + std::to_string(r.k) + "," +
           to_decimal(r.j) + "," + to_decimal(Int(r.alpha.get_num())) + "," +
           to_decimal(Int(r.alpha.get_den())) + "," + to_decimal(r.rep_sup) + "\n";
  }
  return out;
}

std::vector<SweepRow> interval_sweep(const std::vector<std::size_t>& sizes, int s, int k,
                                     const Caps& caps) {
  std::vector<SweepRow> rows;
  for (std::size_t n : sizes) {
    FamilySpec spec;
    spec.family = Family::Arithmetic;
    spec.start = 1;
    spec.step = 1;
    spec.cardinality = n;
    VinogradovStats stats = vinogradov_count(generate(spec), s, k, caps);
    SweepRow row;
    row.n = n;
    row.s = s;
    row.k = k;
    row.j = stats.j;
    row.alpha = stats.alpha.value_or(Rat(0));
    row.rep_sup = stats.rep_sup;
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_report(const Json& report, const std::string& path) {
  write_text_file(path, dump_canonical(report));
}

}  // namespace vinolab
