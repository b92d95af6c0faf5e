#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vinolab/counting.hpp"
#include "vinolab/ground_set.hpp"
#include "vinolab/sumsets.hpp"

namespace vinolab {

// The larger of the positive and negative parts (ties to positives); all
// downstream slope arguments need one consistent sign.
GroundSet sign_split(const GroundSet& a);

struct LevelSelection {
  int level = 0;                // I
  std::vector<Rat> quotients;   // s_1 < s_2 < ... < s_n with d in [2^I, 2^{I+1})
  Int mass = 0;                 // L = sum of d(s_i)^2
  Int level_count = 0;          // ceil(log2 N) + 1, the exact pigeonhole divisor
};

// argmax level of the dyadic mass, ties to the smallest level. The exact
// pigeonhole (#levels) * L >= M and the cap L <= n 2^{2I+2} both hold by
// construction and are re-checked by callers.
LevelSelection dyadic_level_select(const QuotientStats& q, std::size_t n_elements);

struct LineFamily {
  Rat quotient;                    // s_i, reduced
  GroundSet admissible;            // p_i = {a1 : s_i a1 in A}
  VectorSet line;                  // l_i, 2k-vectors (a1..a1^k, a2..a2^k)
  std::vector<std::pair<Int, Int>> pairs;  // m_i = {(a1, a2)}
};

LineFamily build_line_family(const GroundSet& a, int k, const Rat& quotient,
                             const Caps& caps = default_caps());

struct LineLemmaReport {
  bool product_equality = true;   // |u l_i + u l_j| = |u l_i| |u l_j| for all i < j
  bool consecutive_disjoint = true;  // the u l_i + u l_{i+1} are pairwise disjoint
  bool cs_chain = true;           // |u p_{i,k}-sumset| J_{u,k}(p_i) >= |p_i|^{2u}
  std::vector<double> exponents;  // log |u l_i| / log |l_i| per family
  int checked_pairs = 0;
};

LineLemmaReport check_line_lemmas(const GroundSet& a, int k, int u,
                                  const std::vector<LineFamily>& families,
                                  const Caps& caps = default_caps());

struct SumProductReport {
  int s = 0, k = 0, u = 0;
  Rat epsilon;
  std::string sign_branch;  // "positive", "negative-negated", or "all-positive"
  Int working_size = 0;     // |A| after the sign split
  Int quotient_support = 0;  // |A/A|
  Int mult_energy = 0;       // M
  Int sumset_2u = 0;         // |uA + uA| over the moment embedding
  int level = 0;             // I
  Int level_families = 0;    // n
  Int level_mass = 0;        // L
  double lhs_log10 = 0.0;    // N^{2s - 2 eps}
  double rhs_log10 = 0.0;    // |sA + sA| |A/A|^{s - 1/2 - eps}
  double measured_constant = 0.0;  // lhs / rhs
  bool chain_quotient_energy = false;   // |A/A| M >= N^4
  bool chain_pigeonhole = false;        // (#levels) L >= M
  bool chain_level_cap = false;         // L <= n 2^{2I+2}
  bool chain_line_product = false;   // cross sums of distinct families all distinct
  bool chain_line_disjoint = false;  // consecutive-pair blocks pairwise disjoint
  bool chain_line_cs = false;        // per-family Cauchy-Schwarz count bound
  bool chain_assembled = false;         // |uA+uA|^2 >= sum |u l_i + u l_{i+1}|
  bool quotient_branch_done = false;    // |A/A| >= N^{1 + delta_s}
  Rat delta_s;
  bool dyadic_floor_holds = false;      // 2^I >= sqrt(N) / (8 log N), recorded
};

// Dashboard for the 2 <= k <= s <= k(k+1)/2 regime with u defaulting to s.
SumProductReport vmvtsp_report(const GroundSet& a, int s, int k, const Rat& epsilon,
                               std::optional<int> u = std::nullopt,
                               const Caps& caps = default_caps());

// Per-instance excess exponent max(0, log_N J - (2s - k(k+1)/2)); a witness
// for one set only, never an estimate of the global infimum.
double lambda_empirical(const GroundSet& a, int s, int k, const Caps& caps = default_caps());

struct AbsMainReport {
  Int j = 0;
  double alpha_abs_log10 = 0.0;  // log10 of J / N^{2s - k(k+1)/2 + Lambda}
  double hyp_eps_min = 0.0;      // least eps satisfying the scaled hypothesis
  Int lfold_sumset = 0;          // |lA| over the integers
  Int lfold_product = 0;         // |A^{(l)}|
  Int product = 0;               // |AA|
  bool dichotomy_holds = false;  // sup(|A^{(l)}|, |lA|) > N^b
  bool plunnecke_chain = false;  // (|AA|/|A|)^l >= |A^{(l)}|/|A|, exact
};

AbsMainReport absmain_report(const GroundSet& a, int s, int k, const Rat& lambda_assumed, int l,
                             int b, const Caps& caps = default_caps());

}  // namespace vinolab
