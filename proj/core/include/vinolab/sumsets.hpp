#pragma once

#include <memory>
#include <set>
#include <unordered_set>
#include <vector>

#include "vinolab/counting.hpp"
#include "vinolab/errors.hpp"
#include "vinolab/ground_set.hpp"
#include "vinolab/key.hpp"

namespace vinolab {

// A deduplicated set of k-vectors, kept in canonical sorted order so every
// serialization and block split is reproducible.
class VectorSet {
public:
  VectorSet() = default;
  VectorSet(std::size_t dimension, std::vector<PowerSumKey> members);

  static VectorSet from_embedding(const MomentEmbedding& e);
  static VectorSet from_integers(const std::vector<Int>& values);  // 1-vectors

  std::size_t dimension() const { return dimension_; }
  const std::vector<PowerSumKey>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const PowerSumKey& key) const;

private:
  std::size_t dimension_ = 0;
  std::vector<PowerSumKey> members_;  // sorted, unique
};

// Hypergraph on s-tuples over a fixed embedding. Two representations share
// one interface: an explicit tuple list, or the sum-membership form
// {tuples whose coordinate sum lies in a target set}, which is how every
// graph produced by popular_sums (and its descendants) arises.
class TupleGraph {
public:
  static TupleGraph explicit_graph(std::shared_ptr<const MomentEmbedding> embedding, int arity,
                                   std::vector<std::vector<int>> tuples);
  static TupleGraph sum_membership(std::shared_ptr<const MomentEmbedding> embedding, int arity,
                                   VectorSet target, Int size);
  // The complete graph A^s.
  static TupleGraph complete(std::shared_ptr<const MomentEmbedding> embedding, int arity,
                             const Caps& caps = default_caps());

  int arity() const { return arity_; }
  bool is_explicit() const { return explicit_; }
  const MomentEmbedding& embedding() const { return *embedding_; }
  std::shared_ptr<const MomentEmbedding> embedding_ptr() const { return embedding_; }
  const std::vector<std::vector<int>>& tuples() const { return tuples_; }
  const VectorSet& target() const { return target_; }
  const Int& size() const { return size_; }
  bool empty() const { return size_ == 0; }

private:
  bool explicit_ = true;
  int arity_ = 0;
  std::shared_ptr<const MomentEmbedding> embedding_;
  std::vector<std::vector<int>> tuples_;
  VectorSet target_;  // sum-membership form: realized target sums
  Int size_ = 0;
};

// Multiplicative sets: exact integers for products, reduced fractions with
// positive denominators for quotients.
struct RationalSet {
  std::set<Rat> members;
  std::size_t size() const { return members.size(); }
};

// {p_1 + ... + p_l : p_i in the embedding}, by iterated support convolution.
VectorSet moment_sumset(const MomentEmbedding& e, int l, const Caps& caps = default_caps());

// Sigma(G): the set of coordinate sums of tuples of G.
VectorSet restricted_sumset(const TupleGraph& g, const Caps& caps = default_caps());

// mA - nA over k-vectors; ground sets embed as 1-vectors.
VectorSet iterated_sum_difference(const VectorSet& a, int m, int n,
                                  const Caps& caps = default_caps());
VectorSet iterated_sum_difference(const GroundSet& a, int m, int n,
                                  const Caps& caps = default_caps());

RationalSet product_set(const GroundSet& a, int l, const Caps& caps = default_caps());
RationalSet quotient_set(const GroundSet& a, const Caps& caps = default_caps());

struct PlunneckeReport {
  Rat doubling;  // K = |A+A| / |A|
  Int lhs;       // |mA - nA|
  Rat rhs;       // K^{m+n} |A|
  bool pass;     // exact comparison, never floats
};

PlunneckeReport plunnecke_check(const GroundSet& a, int m, int n,
                                const Caps& caps = default_caps());

}  // namespace vinolab
