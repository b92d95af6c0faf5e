#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vinolab/extraction.hpp"
#include "vinolab/json_io.hpp"
#include "vinolab/suites.hpp"
#include "vinolab/sumproduct.hpp"

namespace {

using namespace vinolab;

std::uint64_t parse_cap(const std::string& text) {
  try {
    double v = std::stod(text);
    if (v < 1 || v > 1e19) throw ConfigError("cap out of range: " + text);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse cap '" + text + "'");
  }
}

void apply_caps(const std::string& cli_cap) {
  const char* env = std::getenv("VINOLAB_CAP");
  std::optional<std::uint64_t> cap;
  if (env != nullptr && *env != '\0') cap = parse_cap(env);
  if (!cli_cap.empty()) cap = parse_cap(cli_cap);  // explicit flag wins
  if (cap) {
    default_caps().table_entries = *cap;
    default_caps().iterations = *cap;
  }
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << dump_canonical(j);
  else
    emit_report(j, out_path);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split_commas(text)) out.push_back(std::stoi(part));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

struct GenArgs {
  std::string family = "ap";
  std::string start = "1", step = "1", ratio = "2";
  std::string lo = "1", hi = "100";
  std::size_t n = 8;
  std::uint64_t seed = 0;
  std::string elements;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  FamilySpec spec;
  if (args.family == "ap" || args.family == "arithmetic") {
    spec.family = Family::Arithmetic;
    spec.start = parse_int(args.start);
    spec.step = parse_int(args.step);
  } else if (args.family == "gp" || args.family == "geometric") {
    spec.family = Family::Geometric;
    spec.start = parse_int(args.start);
    spec.ratio = parse_int(args.ratio);
  } else if (args.family == "random" || args.family == "random-subset") {
    spec.family = Family::RandomSubset;
    spec.range_lo = parse_int(args.lo);
    spec.range_hi = parse_int(args.hi);
    spec.seed = args.seed;
  } else if (args.family == "explicit") {
    spec.family = Family::Explicit;
    for (const auto& part : split_commas(args.elements)) spec.elements.push_back(parse_int(part));
  } else {
    throw ConfigError("unknown family '" + args.family + "'");
  }
  spec.cardinality = args.n;
  GroundSet a = generate(spec);
  if (args.out.empty())
    std::cout << dump_canonical(ground_set_to_json(a));
  else
    write_set_file(args.out, a);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computation and certification for power-sum solution counting,\n"
               "moment-curve sumsets, subset extraction, and sum-product reports"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string cap_flag;
  app.add_option("--cap", cap_flag, "Resource cap (table entries / iterations), e.g. 1e8");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a ground-set file");
  gen->add_option("--family", gen_args.family, "ap | gp | random | explicit");
  gen->add_option("--start", gen_args.start);
  gen->add_option("--step", gen_args.step);
  gen->add_option("--ratio", gen_args.ratio);
  gen->add_option("--lo", gen_args.lo);
  gen->add_option("--hi", gen_args.hi);
  gen->add_option("--n", gen_args.n);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--elements", gen_args.elements, "comma-separated values for --family explicit");
  gen->add_option("-o,--out", gen_args.out);

  auto* count = app.add_subcommand("count", "Exact solution counting");
  std::string count_set, count_out, count_m;
  int count_s = 2, count_k = 1;
  bool count_naive = false;
  auto* count_j = count->add_subcommand("j", "Solution count of the s,k power-sum system");
  count_j->add_option("--set", count_set)->required();
  count_j->add_option("--s", count_s)->required();
  count_j->add_option("--k", count_k)->required();
  count_j->add_flag("--naive", count_naive, "also run the literal N^{2s} oracle");
  count_j->add_option("--m", count_m, "diameter exponent p/q to check X_A <= N^m against");
  count_j->add_option("-o,--out", count_out);

  std::string sweep_sizes = "8,16,24,32", sweep_csv_path;
  int sweep_s = 3, sweep_k = 2;
  auto* count_sweep = count->add_subcommand("sweep", "J over intervals {1..n}");
  count_sweep->add_option("--sizes", sweep_sizes, "comma-separated interval sizes");
  count_sweep->add_option("--s", sweep_s);
  count_sweep->add_option("--k", sweep_k);
  count_sweep->add_option("--csv", sweep_csv_path, "output CSV path");

  auto* sumset = app.add_subcommand("sumset", "Exact sumset and product-set computations");
  std::string ss_set, ss_out;
  int ss_k = 2, ss_l = 2, ss_m = 1, ss_n = 1;
  auto* ss_moment = sumset->add_subcommand("moment", "l-fold sumset of the moment embedding");
  ss_moment->add_option("--set", ss_set)->required();
  ss_moment->add_option("--k", ss_k)->required();
  ss_moment->add_option("--l", ss_l)->required();
  ss_moment->add_option("-o,--out", ss_out);
  auto* ss_product = sumset->add_subcommand("product", "l-fold product set");
  ss_product->add_option("--set", ss_set)->required();
  ss_product->add_option("--l", ss_l)->required();
  ss_product->add_option("-o,--out", ss_out);
  auto* ss_quotient = sumset->add_subcommand("quotient", "quotient set A/A");
  ss_quotient->add_option("--set", ss_set)->required();
  ss_quotient->add_option("-o,--out", ss_out);
  auto* ss_diff = sumset->add_subcommand("diff", "iterated sum-difference mA - nA");
  ss_diff->add_option("--set", ss_set)->required();
  ss_diff->add_option("--m", ss_m)->required();
  ss_diff->add_option("--n", ss_n)->required();
  ss_diff->add_option("-o,--out", ss_out);

  auto* extract = app.add_subcommand("extract", "Run the subset-extraction pipeline");
  std::string ex_set, ex_eps = "1/10", ex_delta, ex_l = "2", ex_trace;
  int ex_s = 6, ex_k = 2;
  extract->add_option("--set", ex_set)->required();
  extract->add_option("--s", ex_s)->required();
  extract->add_option("--k", ex_k)->required();
  extract->add_option("--eps", ex_eps, "epsilon as p/q");
  extract->add_option("--delta", ex_delta, "delta as p/q (default min(eps/100, 1/100))");
  extract->add_option("--l", ex_l, "comma-separated fold counts to certify");
  extract->add_option("--trace", ex_trace, "trace output path");

  auto* sumprod = app.add_subcommand("sumprod", "Sum-product dashboard");
  std::string sp_set, sp_eps = "1/10", sp_report, sp_lambda = "0";
  int sp_s = 3, sp_k = 2, sp_u = 0, sp_absl = 0, sp_absb = 2;
  sumprod->add_option("--set", sp_set)->required();
  sumprod->add_option("--s", sp_s)->required();
  sumprod->add_option("--k", sp_k)->required();
  sumprod->add_option("--eps", sp_eps, "epsilon as p/q");
  sumprod->add_option("--u", sp_u, "fold parameter (defaults to s)");
  sumprod->add_option("--report", sp_report, "report output path");
  sumprod->add_option("--absmain-l", sp_absl, "also emit the l-fold product dichotomy report");
  sumprod->add_option("--absmain-b", sp_absb, "exponent b for the dichotomy");
  sumprod->add_option("--lambda", sp_lambda, "assumed excess exponent p/q for the dichotomy");

  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  std::string vf_suite = "core";
  std::uint64_t vf_seed = 42;
  verify->add_option("--suite", vf_suite, "core | oracle | extraction | sumproduct");
  verify->add_option("--seed", vf_seed);

  try {
    app.parse(argc, argv);
    apply_caps(cap_flag);

    if (gen->parsed()) return cmd_gen(gen_args);

    if (count->parsed()) {
      if (count_j->parsed()) {
        GroundSet a = read_set_file(count_set);
        VinogradovStats stats = vinogradov_count(a, count_s, count_k);
        Json j = stats_to_json(stats);
        j["diameter"] = to_decimal(a.diameter());
        if (auto m_emp = a.diameter_exponent()) j["m_emp"] = *m_emp;
        if (!count_m.empty()) {
          Rat m = parse_rat(count_m);
          bool within = compare_power_product(
                            Rat(a.diameter() > 0 ? a.diameter() : Int(1)),
                            {{Rat(Int(static_cast<unsigned long>(a.size()))), m}}) <= 0;
          j["diameter_within_m"] = within;
        }
        if (count_naive) {
          Int naive = vinogradov_count_naive(a, count_s, count_k);
          j["naive"] = to_decimal(naive);
          j["naive_matches"] = naive == stats.j;
        }
        emit(j, count_out);
        return 0;
      }
      if (count_sweep->parsed()) {
        std::vector<std::size_t> sizes;
        for (int v : parse_int_list(sweep_sizes)) sizes.push_back(static_cast<std::size_t>(v));
        auto rows = interval_sweep(sizes, sweep_s, sweep_k);
        std::string csv = sweep_csv(rows);
        if (sweep_csv_path.empty())
          std::cout << csv;
        else
          write_text_file(sweep_csv_path, csv);
        return 0;
      }
      throw ConfigError("count needs a subcommand (j, sweep)");
    }

    if (sumset->parsed()) {
      GroundSet a = read_set_file(ss_set);
      if (ss_moment->parsed()) {
        VectorSet v = moment_sumset(moment_embed(a, ss_k), ss_l);
        Json j = vector_set_to_json(v);
        j["size"] = v.size();
        emit(j, ss_out);
        return 0;
      }
      if (ss_product->parsed()) {
        RationalSet r = product_set(a, ss_l);
        Json j = rational_set_to_json(r);
        j["size"] = r.size();
        emit(j, ss_out);
        return 0;
      }
      if (ss_quotient->parsed()) {
        RationalSet r = quotient_set(a);
        Json j = rational_set_to_json(r);
        j["size"] = r.size();
        emit(j, ss_out);
        return 0;
      }
      if (ss_diff->parsed()) {
        VectorSet v = iterated_sum_difference(a, ss_m, ss_n);
        Json j = vector_set_to_json(v);
        j["size"] = v.size();
        emit(j, ss_out);
        return 0;
      }
      throw ConfigError("sumset needs a subcommand (moment, product, quotient, diff)");
    }

    if (extract->parsed()) {
      GroundSet a = read_set_file(ex_set);
      PipelineParams params;
      params.s = ex_s;
      params.k = ex_k;
      params.epsilon = parse_rat(ex_eps);
      params.delta = ex_delta.empty() ? PipelineParams::default_delta(params.epsilon)
                                      : parse_rat(ex_delta);
      params.l_list = parse_int_list(ex_l);
      ExtractionTrace trace = run_pipeline(a, params);
      emit(trace_to_json(trace), ex_trace);
      if (trace.failed_stage && *trace.failed_stage == "resource-limit") return 3;
      return 0;
    }

    if (sumprod->parsed()) {
      GroundSet a = read_set_file(sp_set);
      SumProductReport report = vmvtsp_report(
          a, sp_s, sp_k, parse_rat(sp_eps),
          sp_u > 0 ? std::optional<int>(sp_u) : std::nullopt);
      Json j = sumproduct_to_json(report);
      if (sp_absl > 0) {
        // the dichotomy chain needs s >= k(k+1); reuse s when it qualifies
        int abs_s = std::max(sp_s, sp_k * (sp_k + 1));
        j["absmain"] =
            absmain_to_json(absmain_report(a, abs_s, sp_k, parse_rat(sp_lambda), sp_absl, sp_absb));
      }
      emit(j, sp_report);
      return 0;
    }

    if (verify->parsed()) {
      ExperimentConfig config;
      config.seed = vf_seed;
      config.caps = default_caps();
      SuiteResult result = run_suite(vf_suite, config);
      for (const auto& check : result.checks)
        std::cout << "[" << check.status << "] " << result.suite << "/" << check.name
                  << (check.details.empty() ? "" : "  (" + check.details + ")") << "\n";
      std::cout << (result.failed() ? "FAIL" : "OK") << "\n";
      return result.exit_status();
    }

    throw ConfigError("no subcommand");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
