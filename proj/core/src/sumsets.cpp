#include "vinolab/sumsets.hpp"

#include <algorithm>

#include "vinolab/detail/kernels.hpp"

namespace vinolab {

VectorSet::VectorSet(std::size_t dimension, std::vector<PowerSumKey> members)
    : dimension_(dimension), members_(std::move(members)) {
  for (const auto& m : members_)
    if (m.dimension() != dimension_) throw DimensionMismatch();
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VectorSet VectorSet::from_embedding(const MomentEmbedding& e) {
  std::vector<PowerSumKey> keys;
  keys.reserve(e.size());
  for (const auto& p : e.points()) keys.push_back(p.coords);
  return VectorSet(static_cast<std::size_t>(e.degree()), std::move(keys));
}

VectorSet VectorSet::from_integers(const std::vector<Int>& values) {
  std::vector<PowerSumKey> keys;
  keys.reserve(values.size());
  for (const auto& v : values) keys.push_back(PowerSumKey({v}));
  return VectorSet(1, std::move(keys));
}

bool VectorSet::contains(const PowerSumKey& key) const {
  return std::binary_search(members_.begin(), members_.end(), key);
}

TupleGraph TupleGraph::explicit_graph(std::shared_ptr<const MomentEmbedding> embedding, int arity,
                                      std::vector<std::vector<int>> tuples) {
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != arity)
      throw std::invalid_argument("tuple arity mismatch");
    for (int idx : t)
      if (idx < 0 || static_cast<std::size_t>(idx) >= embedding->size())
        throw std::invalid_argument("tuple index out of range");
  }
  TupleGraph g;
  g.explicit_ = true;
  g.arity_ = arity;
  g.embedding_ = std::move(embedding);
  g.size_ = Int(static_cast<unsigned long>(tuples.size()));
  g.tuples_ = std::move(tuples);
  return g;
}

TupleGraph TupleGraph::sum_membership(std::shared_ptr<const MomentEmbedding> embedding, int arity,
                                      VectorSet target, Int size) {
  TupleGraph g;
  g.explicit_ = false;
  g.arity_ = arity;
  g.embedding_ = std::move(embedding);
  g.target_ = std::move(target);
  g.size_ = std::move(size);
  return g;
}

TupleGraph TupleGraph::complete(std::shared_ptr<const MomentEmbedding> embedding, int arity,
                                const Caps& caps) {
  RepTable table = rep_table(*embedding, arity, caps);
  std::vector<PowerSumKey> keys;
  keys.reserve(table.support_size());
  for (const auto& [key, c] : table.entries()) keys.push_back(key);
  Int n = Int(static_cast<unsigned long>(embedding->size()));
  return sum_membership(std::move(embedding),
                        arity,
                        VectorSet(static_cast<std::size_t>(table.degree()), std::move(keys)),
                        int_pow(n, static_cast<unsigned long>(arity)));
}

VectorSet moment_sumset(const MomentEmbedding& e, int l, const Caps& caps) {
  if (l < 1) throw std::invalid_argument("moment_sumset: l must be >= 1");
  VectorSet acc = VectorSet::from_embedding(e);
  VectorSet base = acc;
  for (int step = 1; step < l; ++step) {
    auto keys = detail::pair_sumset(acc.members(), base.members(), caps, "moment_sumset");
    check_table_cap(keys.size(), caps, "moment_sumset");
    acc = VectorSet(acc.dimension(), std::move(keys));
  }
  return acc;
}

VectorSet restricted_sumset(const TupleGraph& g, const Caps& caps) {
  if (g.empty()) throw EmptyGraph();
  if (!g.is_explicit()) return g.target();
  std::vector<PowerSumKey> sums;
  sums.reserve(g.tuples().size());
  check_iteration_cap(static_cast<double>(g.tuples().size()) * g.arity(), caps,
                      "restricted_sumset");
  for (const auto& t : g.tuples()) {
    PowerSumKey acc = g.embedding().key(static_cast<std::size_t>(t[0]));
    for (std::size_t i = 1; i < t.size(); ++i)
      acc = acc + g.embedding().key(static_cast<std::size_t>(t[i]));
    sums.push_back(std::move(acc));
  }
  return VectorSet(static_cast<std::size_t>(g.embedding().degree()), std::move(sums));
}

namespace {

VectorSet iterated_sumset(const VectorSet& a, int folds, const Caps& caps) {
  VectorSet acc = a;
  for (int step = 1; step < folds; ++step) {
    auto keys = detail::pair_sumset(acc.members(), a.members(), caps, "iterated_sumset");
    acc = VectorSet(a.dimension(), std::move(keys));
  }
  return acc;
}

VectorSet zero_set(std::size_t dim) {
  std::vector<Int> zeros(dim, Int(0));
  return VectorSet(dim, {PowerSumKey(zeros)});
}

}  // namespace

VectorSet iterated_sum_difference(const VectorSet& a, int m, int n, const Caps& caps) {
  if (m < 0 || n < 0 || m + n < 1)
    throw std::invalid_argument("iterated_sum_difference: need m, n >= 0 and m + n >= 1");
  if (a.size() == 0) throw EmptyInput("iterated_sum_difference over empty set");
  VectorSet left = m == 0 ? zero_set(a.dimension()) : iterated_sumset(a, m, caps);
  if (n == 0) return left;
  VectorSet right = iterated_sumset(a, n, caps);
  std::vector<PowerSumKey> negated;
  negated.reserve(right.size());
  for (const auto& key : right.members()) negated.push_back(key.negated());
  auto keys = detail::pair_sumset(left.members(), negated, caps, "iterated_sum_difference");
  return VectorSet(a.dimension(), std::move(keys));
}

VectorSet iterated_sum_difference(const GroundSet& a, int m, int n, const Caps& caps) {
  return iterated_sum_difference(VectorSet::from_integers(a.elements()), m, n, caps);
}

RationalSet product_set(const GroundSet& a, int l, const Caps& caps) {
  if (l < 1) throw std::invalid_argument("product_set: l must be >= 1");
  std::set<Rat> acc;
  for (const auto& v : a.elements()) acc.insert(Rat(v));
  for (int step = 1; step < l; ++step) {
    check_iteration_cap(static_cast<double>(acc.size()) * static_cast<double>(a.size()), caps,
                        "product_set");
    std::set<Rat> next;
    for (const auto& p : acc)
      for (const auto& v : a.elements()) next.insert(p * Rat(v));
    check_table_cap(next.size(), caps, "product_set");
    acc = std::move(next);
  }
  RationalSet out;
  out.members = std::move(acc);
  return out;
}

RationalSet quotient_set(const GroundSet& a, const Caps& caps) {
  if (a.contains_zero()) throw ZeroElement();
  check_iteration_cap(static_cast<double>(a.size()) * static_cast<double>(a.size()), caps,
                      "quotient_set");
  RationalSet out;
  for (const auto& a1 : a.elements()) {
    for (const auto& a2 : a.elements()) {
      Rat q(a2, a1);
      q.canonicalize();
      out.members.insert(q);
    }
  }
  return out;
}

PlunneckeReport plunnecke_check(const GroundSet& a, int m, int n, const Caps& caps) {
  if (m + n < 1) throw std::invalid_argument("plunnecke_check: need m + n >= 1");
  VectorSet ones = VectorSet::from_integers(a.elements());
  Int doubled = detail::pair_sumset_size(ones.members(), ones.members(), caps, "plunnecke_check");
  PlunneckeReport report;
  Int size = Int(static_cast<unsigned long>(a.size()));
  report.doubling = Rat(doubled, size);
  report.doubling.canonicalize();
  report.lhs = Int(static_cast<unsigned long>(iterated_sum_difference(a, m, n, caps).size()));
  report.rhs = rat_pow(report.doubling, m + n) * Rat(size);
  report.pass = Rat(report.lhs) <= report.rhs;
  return report;
}

}  // namespace vinolab
