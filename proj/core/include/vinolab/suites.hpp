#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vinolab/errors.hpp"
#include "vinolab/json_io.hpp"
#include "vinolab/numeric.hpp"

namespace vinolab {

struct ExperimentConfig {
  std::uint64_t seed = 42;
  Caps caps;
};

struct CheckResult {
  std::string name;
  std::string status;  // "pass" | "fail" | "recorded"
  std::string details;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;

  bool failed() const {
    for (const auto& c : checks)
      if (c.status == "fail") return true;
    return false;
  }
  int exit_status() const { return failed() ? 1 : 0; }
};

// Deterministic invariant suites: "core" (exact identities), "oracle"
// (convolution vs naive counting plus recorded upper-bound reports),
// "extraction" (pipeline runs), "sumproduct" (dashboards and line lemmas).
SuiteResult run_suite(const std::string& name, const ExperimentConfig& config);

Json suite_to_json(const SuiteResult& result);

struct SweepRow {
  std::size_t n = 0;
  int s = 0, k = 0;
  Int j;
  Rat alpha;
  Int rep_sup;
};

// CSV with the fixed header N,s,k,J,alpha_num,alpha_den,rep_sup.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// J statistics for {1..n} across the given sizes.
std::vector<SweepRow> interval_sweep(const std::vector<std::size_t>& sizes, int s, int k,
                                     const Caps& caps = default_caps());

// Byte-stable report emission.
void emit_report(const Json& report, const std::string& path);

}  // namespace vinolab
