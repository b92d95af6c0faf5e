#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vinolab/counting.hpp"
#include "vinolab/ground_set.hpp"
#include "vinolab/sumsets.hpp"

namespace vinolab {

struct PipelineParams {
  int s = 0;
  int k = 0;
  Rat epsilon;
  Rat delta;                 // defaults to min(epsilon/100, 1/100)
  std::vector<int> l_list;   // fold counts to certify on A'

  static Rat default_delta(const Rat& epsilon);
  void validate() const;  // s >= k(k+1), 0 < eps <= 1, 0 < delta <= eps
};

struct PopularSums {
  VectorSet sums;  // S, the highly-represented target sums
  Rat threshold;   // alpha/2 * N^{s - k(k+1)/2}
  Rat alpha;
  bool alpha_overridden = false;
};

struct PopularSumsResult {
  PopularSums popular;
  TupleGraph graph;  // G = {s-tuples whose sum lies in S}, sum-membership form
  VinogradovStats stats;
};

// Builds S and G; verifies |Sigma(G)| = |S| and sum_{n in S} r(n) = |G|.
PopularSumsResult popular_sums(const GroundSet& a, int s, int k,
                               std::optional<Rat> alpha_override = std::nullopt,
                               const Caps& caps = default_caps());

// For odd arity: the densest last-coordinate section G_a, with
// |G_a| >= |G| / N and Sigma(G_a) inside a translate of Sigma(G).
// Ties pick the smallest a.
TupleGraph reduce_odd_s(const TupleGraph& g, const Caps& caps = default_caps());

// Right-neighbourhood index over half-strings, grouped into classes on which
// R(.) is constant: distinct half sums for sum-membership graphs, singleton
// strings for explicit graphs. Bitset rows over class indices.
class NeighborhoodIndex {
public:
  static NeighborhoodIndex build(const TupleGraph& g, const Caps& caps = default_caps());

  int half_arity() const { return half_arity_; }
  std::size_t class_count() const { return classes_.size(); }
  std::size_t ground_size() const { return embedding_->size(); }
  const MomentEmbedding& embedding() const { return *embedding_; }

  const PowerSumKey& class_key(std::size_t c) const { return classes_[c]; }
  const Int& class_weight(std::size_t c) const { return weights_[c]; }
  const std::vector<int>& first_string(std::size_t c) const { return first_strings_[c]; }
  bool adjacent(std::size_t row, std::size_t col) const {
    return (adj_[row * blocks_ + col / 64] >> (col % 64)) & 1;
  }

  const Int& graph_size() const { return graph_size_; }  // |G| = sum_x |R(x)|
  Int row_size(std::size_t c) const;                     // |R(x)| for x in class c
  // sum_m w_m adj(a, m) adj(b, m) = |R(a) cap R(b)| counted over strings
  Int intersection_weight(std::size_t a, std::size_t b) const;

  bool string_in_classes(const std::vector<int>& str, const std::vector<char>& mask) const;
  Int mask_weight(const std::vector<char>& mask) const;
  // distinct half sums over the classes of a mask
  VectorSet mask_keys(const std::vector<char>& mask) const;

private:
  int half_arity_ = 0;
  std::size_t blocks_ = 0;  // 64-bit blocks per row
  std::shared_ptr<const MomentEmbedding> embedding_;
  std::vector<PowerSumKey> classes_;  // sorted by key
  std::vector<Int> weights_;
  std::vector<std::vector<int>> first_strings_;
  std::vector<std::uint64_t> adj_;
  std::unordered_map<PowerSumKey, std::size_t, PowerSumKeyHash> key_to_class_;
  Int graph_size_ = 0;
  bool by_class_ = true;  // false: one class per string (explicit graphs)
};

// One recorded inequality or identity of the pipeline. Exact sides carry
// decimal strings; power expressions carry log10 values.
struct IneqRecord {
  std::string stage;
  std::string name;
  std::string relation;  // "=", ">=", "<=", ">"
  std::string kind;      // "assert" | "conditional" | "recorded"
  bool holds = false;
  std::optional<std::string> lhs_exact;
  std::optional<std::string> rhs_exact;
  std::optional<double> lhs_log10;
  std::optional<double> rhs_log10;
  std::string witness;
};

struct PivotResult {
  std::size_t x_class = 0;
  std::vector<int> x_string;  // witness half-string (indices into the ground set)
  Int g1_size = 0;            // |G1| = sum_y |R(x) cap R(y)|
  Int cs_lhs = 0;             // the maximized intersection mass
  Int cs_rhs_num = 0;         // |G|^2
  Int cs_rhs_den = 0;         // r * n = N^{s/2} * N^{s/2}
  VectorSet sigma_g1;
};

// Pivot x maximizing sum_y |R(x) cap R(y)|, ties to the lexicographically
// smallest half-string; exact Cauchy-Schwarz certificate attached.
PivotResult select_pivot(const NeighborhoodIndex& g, const Caps& caps = default_caps());
PivotResult select_pivot(const TupleGraph& g, const Caps& caps = default_caps());

struct PruneResult {
  std::vector<char> y_mask, y1_mask, y2_mask;  // class masks
  Int y_size = 0, y1_size = 0, y2_size = 0;
  std::size_t z_class = 0;
  std::vector<int> z_string;
  Int z_count = 0;       // |{y in Y : yz in G1}| for the chosen z
  Int y_inter_mass = 0;  // sum over y in Y of |R(y) cap R(x)|
  Int rx_size = 0;       // |R(x)| counted over strings
  VectorSet sigma_y1, sigma_y2, sigma_rx;
  Rat s1_threshold;  // |Y1| / (2 |Sigma(Y1)|)
  Int min_inter_sigma = 0;  // min over y in Y2 of |Sigma(R(y) cap R(x))|
};

PruneResult prune_y(const NeighborhoodIndex& g, std::size_t x_class, const Rat& alpha,
                    const PipelineParams& params, const Caps& caps = default_caps());

struct PrebsgResult {
  VectorSet z1, z2;
  int block_count = 0;   // r
  int chosen_block = 0;  // energy-maximizing j (0-based)
  Int energy = 0;        // E(Z1, Z2)
  Int restricted_mass = 0;  // sum over n in Sigma(G1) of r(U, V; n)
};

// Splits U into |V|-sized blocks, keeps the energy-maximizing one (ties to
// the first), pads the trailing block if chosen. Z1 = V. The certificate
// E * r^2 * |Sigma(G1)| >= mass^2 is exact and unconditional.
PrebsgResult prebsg_split(const VectorSet& u, const VectorSet& v, const VectorSet& sigma_g1,
                          const Caps& caps = default_caps());

struct BsgConstants {
  Rat alpha;
  double c1 = 0.0;  // 3/2^19 * alpha^3 / ln(32/alpha)
  double c2 = 0.0;  // 2^45/3 * ln(32/alpha) / alpha^7
};

struct BsgCertification {
  Int s2_size = 0;
  Int s2_doubling = 0;  // |S2 + S2|
  BsgConstants constants;
  bool constant_form_holds = false;  // |S2| >= C1 |Z1|, |S2+S2| <= C2 |Z1| (float bound)
  bool pipeline_form_holds = false;  // |S2| >= |Z1|^{1-eps/5}, |S2+S2| <= |S2|^{1+eps/2} (exact)
  bool exhausted = false;
  int candidates_scored = 0;

  // (power form, constant form) as a two-bit score; larger certifies better
  int score() const { return (pipeline_form_holds ? 2 : 0) + (constant_form_holds ? 1 : 0); }
};

struct BsgResult {
  VectorSet s2;  // subset of Z1
  BsgCertification cert;
};

// Deterministic popular-path extraction with self-certification; exhaustive
// fallback over subsets when |Z1| <= 20 and no candidate certifies.
BsgResult bsg_extract(const VectorSet& z1, const VectorSet& z2, const Rat& alpha,
                      const Rat& epsilon, const Caps& caps = default_caps());

// The fallback alone: largest subset of Z1 (size-descending, lexicographic)
// whose pipeline-form certification holds, if any.
std::optional<BsgResult> bsg_exhaustive_best(const VectorSet& z1, const Rat& alpha,
                                             const Rat& epsilon,
                                             const Caps& caps = default_caps());

struct LFoldCert {
  int l = 0;
  Int lfold_size = 0;  // |l A'| over the moment embedding of A'
  double lhs_log10 = 0.0;
  double rhs_log10 = 0.0;
  bool holds = false;  // exact comparison with guard-band escalation
};

struct FinalizeResult {
  std::vector<char> y3_mask;
  Int y3_size = 0;
  std::vector<int> w_string;  // length s/2 - 1; empty when s = 2
  Int w_count = 0;            // |{a : wa in Y3}| = |A'|
  GroundSet a_prime;
  std::vector<LFoldCert> certifications;
};

FinalizeResult finalize_extraction(const NeighborhoodIndex& g, const std::vector<char>& y1_mask,
                                   const VectorSet& s2, const PipelineParams& params,
                                   const Rat& alpha, const Caps& caps = default_caps());

struct HypothesisRecord {
  bool holds = false;         // log(1/alpha) <= eps k(k+1)/43200 log N, exact
  double lhs_log10 = 0.0;     // log10(1/alpha); negative when alpha > 1
  double rhs_log10 = 0.0;
  double eps_threshold = 0.0; // least eps for which the hypothesis holds
};

struct ExtractionTrace {
  PipelineParams params;
  VinogradovStats stats;
  HypothesisRecord hypothesis;
  std::vector<IneqRecord> records;
  std::vector<Int> pivot_x, z_pick, w_pick;  // witnesses as element values
  std::optional<GroundSet> a_prime;
  std::vector<LFoldCert> certifications;
  std::optional<std::string> failed_stage;
  std::optional<std::string> failure_message;

  bool completed() const { return !failed_stage.has_value(); }
  bool all_asserts_hold() const;
};

// count -> popular sums -> (odd-arity reduction) -> pivot -> prune ->
// prebsg -> bsg -> finalize. Empty stages and resource limits become a
// marked trace rather than an exception.
ExtractionTrace run_pipeline(const GroundSet& a, const PipelineParams& params,
                             const Caps& caps = default_caps());

}  // namespace vinolab
