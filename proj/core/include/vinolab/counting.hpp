#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "vinolab/errors.hpp"
#include "vinolab/ground_set.hpp"
#include "vinolab/key.hpp"
#include "vinolab/numeric.hpp"

namespace vinolab {

// Representation table of the s-fold moment sums: key n -> number of ordered
// s-tuples from the embedding summing to n. Built by convolving the
// (s-1)-table with the 1-table, never by enumerating N^{2s}.
class RepTable {
public:
  using Map = std::unordered_map<PowerSumKey, Int, PowerSumKeyHash>;

  int degree() const { return degree_; }
  int arity() const { return arity_; }
  const Map& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  const Int& total() const { return total_; }  // == N^s

  Int count_of(const PowerSumKey& key) const;
  Int sum_of_squares() const;  // == J_{s,k}(A)
  Int max_count() const;       // == r(A^s)

  // Deterministic iteration order for serialization and reports.
  std::vector<const PowerSumKey*> sorted_keys() const;

private:
  friend RepTable rep_table(const MomentEmbedding&, int, const Caps&);
  int degree_ = 0;
  int arity_ = 0;
  Map entries_;
  Int total_ = 0;
};

RepTable rep_table(const MomentEmbedding& embedding, int arity, const Caps& caps = default_caps());
RepTable rep_table(const GroundSet& a, int k, int s, const Caps& caps = default_caps());

struct VinogradovStats {
  int s = 0;
  int k = 0;
  Int n_elements = 0;
  Int j = 0;                  // J_{s,k}(A)
  std::optional<Rat> alpha;   // J / N^{2s - k(k+1)/2}, present when 2s >= k(k+1)
  Int rep_sup = 0;            // r(A^s)
  Int diagonal = 0;           // permutation solutions
  Int sumset_size = 0;        // |sA|
  double lambda_emp = 0.0;    // max(0, log_N J - (2s - k(k+1)/2))
};

VinogradovStats vinogradov_count(const GroundSet& a, int s, int k,
                                 const Caps& caps = default_caps());

// Literal O(N^{2s}) oracle: enumerate every pair of s-tuples and test all k
// power-sum equations directly. Shares no code path with rep_table.
Int vinogradov_count_naive(const GroundSet& a, int s, int k, const Caps& caps = default_caps());

// Diagonal solutions: sum over multisets of (multinomial permutation count)^2.
Int diagonal_count(const GroundSet& a, int s, const Caps& caps = default_caps());

Int additive_energy(const std::vector<PowerSumKey>& x, const std::vector<PowerSumKey>& y,
                    const Caps& caps = default_caps());

struct QuotientStats {
  std::map<Rat, Int> d_table;  // reduced fraction -> d(x), sorted by value
  Int multiplicative_energy = 0;
  Int support = 0;  // |A/A|
};

QuotientStats quotient_counts(const GroundSet& a, const Caps& caps = default_caps());

struct LowerBoundReport {
  Int j;
  Int n_pow_s;
  Int ratio_floor;  // ceil(N^{2s} / |sA|)
  bool pass;        // J >= N^s and J * |sA| >= N^{2s}
};

LowerBoundReport lower_bound_check(const GroundSet& a, int s, int k,
                                   const Caps& caps = default_caps());

// Checked report against the diameter-scaled upper bound
// J <= X_A^eps (N^s + N^{2s-k(k+1)/2}); a violation would be remarkable.
struct DiameterBoundReport {
  Int j;
  Rat eps;
  bool holds;
  double eps_min;  // least eps making the bound hold (0 when X_A <= 1)
};

DiameterBoundReport diameter_bound_check(const GroundSet& a, int s, int k,
                                         const Rat& eps = Rat(1, 2),
                                         const Caps& caps = default_caps());

// Empirical excess exponents, reported only per instance:
//   rep_sup against N^{s - k(k+1)/2}  (delta_emp)
//   J against N^{2s - k(k+1)/2}       (lambda_emp)
double rep_sup_excess(const VinogradovStats& stats);

}  // namespace vinolab
