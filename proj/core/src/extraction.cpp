#include "vinolab/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "vinolab/detail/kernels.hpp"

namespace vinolab {

namespace {

Rat half_kk(int k) { return Rat(k * (k + 1), 2); }

// Collects pairwise key sums with periodic deduplication so the working set
// stays bounded; finishes as a sorted VectorSet.
class SumCollector {
public:
  SumCollector(std::size_t dim, bool fast_ok) : dim_(dim), fast_(fast_ok) {
    if (fast_) rows_.dim = dim;
  }

  void add_fast(const std::int64_t* a, const std::int64_t* b) {
    for (std::size_t d = 0; d < dim_; ++d) rows_.flat.push_back(a[d] + b[d]);
    if (rows_.size() > compact_at_) {
      detail::sort_unique(rows_);
      compact_at_ = std::max<std::size_t>(rows_.size() * 2, 1u << 22);
    }
  }

  void add_slow(PowerSumKey key) {
    slow_.push_back(std::move(key));
    if (slow_.size() > compact_at_) {
      std::sort(slow_.begin(), slow_.end());
      slow_.erase(std::unique(slow_.begin(), slow_.end()), slow_.end());
      compact_at_ = std::max<std::size_t>(slow_.size() * 2, 1u << 22);
    }
  }

  bool fast() const { return fast_; }

  VectorSet finish() {
    if (fast_) {
      detail::sort_unique(rows_);
      return VectorSet(dim_, detail::from_i64(rows_));
    }
    return VectorSet(dim_, std::move(slow_));
  }

private:
  std::size_t dim_;
  bool fast_;
  detail::I64Rows rows_;
  std::vector<PowerSumKey> slow_;
  std::size_t compact_at_ = 1u << 22;
};

}  // namespace

Rat PipelineParams::default_delta(const Rat& epsilon) {
  Rat hundredth(1, 100);
  Rat scaled = epsilon / 100;
  return scaled < hundredth ? scaled : hundredth;
}

void PipelineParams::validate() const {
  if (s < k * (k + 1))
    throw std::invalid_argument("pipeline needs s >= k(k+1)");
  if (epsilon <= 0 || epsilon > 1) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (delta <= 0 || delta > epsilon)
    throw std::invalid_argument("delta must satisfy 0 < delta <= epsilon");
  for (int l : l_list)
    if (l < 1) throw std::invalid_argument("fold counts must be >= 1");
}

PopularSumsResult popular_sums(const GroundSet& a, int s, int k,
                               std::optional<Rat> alpha_override, const Caps& caps) {
  if (2 * s < k * (k + 1))
    throw std::invalid_argument("popular_sums needs 2s >= k(k+1)");
  auto embedding = std::make_shared<MomentEmbedding>(moment_embed(a, k));
  RepTable table = rep_table(*embedding, s, caps);

  VinogradovStats stats;
  stats.s = s;
  stats.k = k;
  stats.n_elements = Int(static_cast<unsigned long>(a.size()));
  stats.j = table.sum_of_squares();
  stats.rep_sup = table.max_count();
  stats.diagonal = diagonal_count(a, s, caps);
  stats.sumset_size = Int(static_cast<unsigned long>(table.support_size()));
  int kk1 = k * (k + 1);
  Rat alpha_computed(stats.j, int_pow(stats.n_elements, static_cast<unsigned long>(2 * s - kk1 / 2)));
  alpha_computed.canonicalize();
  stats.alpha = alpha_computed;
  if (a.size() >= 2)
    stats.lambda_emp =
        std::max(0.0, log10_int(stats.j) / log10_int(stats.n_elements) - (2.0 * s - 0.5 * kk1));

  Rat alpha = alpha_computed;
  bool overridden = false;
  if (alpha_override) {
    alpha = *alpha_override;
    overridden = true;
    if (alpha > 1) throw DegenerateAlpha("override " + to_decimal(alpha) + " exceeds 1");
    if (alpha <= 0) throw DegenerateAlpha("override must be positive");
  }

  Rat threshold = alpha / 2 *
                  Rat(int_pow(stats.n_elements, static_cast<unsigned long>(s - kk1 / 2)));
  std::vector<PowerSumKey> sums;
  Int graph_size = 0;
  for (const auto& [key, count] : table.entries()) {
    if (Rat(count) >= threshold) {
      sums.push_back(key);
      graph_size += count;
    }
  }
  PopularSumsResult out;
  out.popular.sums = VectorSet(static_cast<std::size_t>(k), std::move(sums));
  out.popular.threshold = threshold;
  out.popular.alpha = alpha;
  out.popular.alpha_overridden = overridden;
  out.graph = TupleGraph::sum_membership(embedding, s, out.popular.sums, graph_size);
  out.stats = std::move(stats);
  return out;
}

TupleGraph reduce_odd_s(const TupleGraph& g, const Caps& caps) {
  if (g.empty()) throw EmptyGraph();
  if (g.arity() % 2 == 0) throw std::invalid_argument("reduce_odd_s needs odd arity");
  const MomentEmbedding& e = g.embedding();

  if (g.is_explicit()) {
    Int best = -1;
    int best_a = 0;
    for (std::size_t ai = 0; ai < e.size(); ++ai) {
      Int count = 0;
      for (const auto& t : g.tuples())
        if (t.back() == static_cast<int>(ai)) ++count;
      if (count > best) {
        best = count;
        best_a = static_cast<int>(ai);
      }
    }
    std::vector<std::vector<int>> reduced;
    for (const auto& t : g.tuples())
      if (t.back() == best_a) reduced.emplace_back(t.begin(), t.end() - 1);
    if (reduced.empty()) throw EmptyGraph();
    return TupleGraph::explicit_graph(g.embedding_ptr(), g.arity() - 1, std::move(reduced));
  }

  RepTable lower = rep_table(e, g.arity() - 1, caps);
  Int best = -1;
  std::size_t best_a = 0;
  for (std::size_t ai = 0; ai < e.size(); ++ai) {
    Int count = 0;
    for (const auto& key : g.target().members()) count += lower.count_of(key - e.key(ai));
    if (count > best) {
      best = count;
      best_a = ai;
    }
  }
  std::vector<PowerSumKey> reduced_target;
  for (const auto& key : g.target().members()) {
    PowerSumKey shifted = key - e.key(best_a);
    if (lower.count_of(shifted) > 0) reduced_target.push_back(std::move(shifted));
  }
  if (reduced_target.empty()) throw EmptyGraph();
  return TupleGraph::sum_membership(g.embedding_ptr(), g.arity() - 1,
                                    VectorSet(static_cast<std::size_t>(e.degree()),
                                              std::move(reduced_target)),
                                    best);
}

NeighborhoodIndex NeighborhoodIndex::build(const TupleGraph& g, const Caps& caps) {
  if (g.arity() % 2 != 0) throw std::invalid_argument("neighbourhood index needs even arity");
  if (g.empty()) throw EmptyGraph();
  NeighborhoodIndex idx;
  idx.half_arity_ = g.arity() / 2;
  idx.embedding_ = g.embedding_ptr();
  const MomentEmbedding& e = *idx.embedding_;
  const std::size_t n = e.size();
  const int h = idx.half_arity_;

  double strings = std::pow(static_cast<double>(n), h);
  check_iteration_cap(strings, caps, "half-string enumeration");

  // Enumerate half-strings lexicographically, grouping by half sum.
  std::unordered_map<PowerSumKey, std::size_t, PowerSumKeyHash> seen;
  std::vector<PowerSumKey> keys_in_order;
  std::vector<Int> weights_in_order;
  std::vector<std::vector<int>> firsts_in_order;
  std::vector<std::size_t> string_class;  // only kept for explicit graphs

  std::vector<int> odo(static_cast<std::size_t>(h), 0);
  bool more = true;
  while (more) {
    PowerSumKey key = e.key(static_cast<std::size_t>(odo[0]));
    for (int i = 1; i < h; ++i) key = key + e.key(static_cast<std::size_t>(odo[i]));
    if (g.is_explicit()) {
      // one class per string
      string_class.push_back(keys_in_order.size());
      keys_in_order.push_back(std::move(key));
      weights_in_order.push_back(1);
      firsts_in_order.push_back(odo);
    } else {
      auto [it, inserted] = seen.emplace(key, keys_in_order.size());
      if (inserted) {
        keys_in_order.push_back(key);
        weights_in_order.push_back(1);
        firsts_in_order.push_back(odo);
      } else {
        weights_in_order[it->second] += 1;
      }
    }
    more = false;
    for (std::size_t pos = odo.size(); pos-- > 0;) {
      if (++odo[pos] < static_cast<int>(n)) {
        more = true;
        break;
      }
      odo[pos] = 0;
    }
  }

  idx.by_class_ = !g.is_explicit();
  const std::size_t c = keys_in_order.size();
  check_table_cap(c, caps, "neighbourhood index classes");

  // Canonical class order: sorted by key for class graphs, string order for
  // explicit ones (where each class is one string).
  std::vector<std::size_t> order(c);
  for (std::size_t i = 0; i < c; ++i) order[i] = i;
  if (idx.by_class_)
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return keys_in_order[a] < keys_in_order[b];
    });
  std::vector<std::size_t> rank(c);
  for (std::size_t i = 0; i < c; ++i) rank[order[i]] = i;

  idx.classes_.resize(c);
  idx.weights_.resize(c);
  idx.first_strings_.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    idx.classes_[rank[i]] = std::move(keys_in_order[i]);
    idx.weights_[rank[i]] = std::move(weights_in_order[i]);
    idx.first_strings_[rank[i]] = std::move(firsts_in_order[i]);
  }
  for (std::size_t i = 0; i < c; ++i) idx.key_to_class_.emplace(idx.classes_[i], i);

  idx.blocks_ = (c + 63) / 64;
  check_table_cap(idx.blocks_ * c, caps, "neighbourhood adjacency");
  idx.adj_.assign(idx.blocks_ * c, 0);
  auto set_bit = [&](std::size_t row, std::size_t col) {
    idx.adj_[row * idx.blocks_ + col / 64] |= (std::uint64_t{1} << (col % 64));
  };

  if (g.is_explicit()) {
    std::vector<std::size_t> pow(static_cast<std::size_t>(h), 1);
    for (int i = h - 2; i >= 0; --i)
      pow[static_cast<std::size_t>(i)] = pow[static_cast<std::size_t>(i + 1)] * n;
    auto rank_of = [&](const int* begin) {
      std::size_t r = 0;
      for (int i = 0; i < h; ++i) r += pow[static_cast<std::size_t>(i)] * static_cast<std::size_t>(begin[i]);
      return r;
    };
    for (const auto& t : g.tuples())
      set_bit(rank[string_class[rank_of(t.data())]], rank[string_class[rank_of(t.data() + h)]]);
  } else {
    std::unordered_set<PowerSumKey, PowerSumKeyHash> target(g.target().members().begin(),
                                                            g.target().members().end());
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = i; j < c; ++j) {
        if (target.count(idx.classes_[i] + idx.classes_[j])) {
          set_bit(i, j);
          set_bit(j, i);
        }
      }
    }
  }

  for (std::size_t i = 0; i < c; ++i) idx.graph_size_ += idx.weights_[i] * idx.row_size(i);
  return idx;
}

Int NeighborhoodIndex::row_size(std::size_t c) const {
  Int acc = 0;
  for (std::size_t b = 0; b < blocks_; ++b) {
    std::uint64_t word = adj_[c * blocks_ + b];
    while (word) {
      unsigned bit = static_cast<unsigned>(__builtin_ctzll(word));
      acc += weights_[b * 64 + bit];
      word &= word - 1;
    }
  }
  return acc;
}

Int NeighborhoodIndex::intersection_weight(std::size_t a, std::size_t b) const {
  Int acc = 0;
  for (std::size_t blk = 0; blk < blocks_; ++blk) {
    std::uint64_t word = adj_[a * blocks_ + blk] & adj_[b * blocks_ + blk];
    while (word) {
      unsigned bit = static_cast<unsigned>(__builtin_ctzll(word));
      acc += weights_[blk * 64 + bit];
      word &= word - 1;
    }
  }
  return acc;
}

bool NeighborhoodIndex::string_in_classes(const std::vector<int>& str,
                                          const std::vector<char>& mask) const {
  if (by_class_) {
    PowerSumKey key = embedding_->key(static_cast<std::size_t>(str[0]));
    for (std::size_t i = 1; i < str.size(); ++i)
      key = key + embedding_->key(static_cast<std::size_t>(str[i]));
    auto it = key_to_class_.find(key);
    return it != key_to_class_.end() && mask[it->second];
  }
  std::size_t r = 0;
  for (int v : str) r = r * embedding_->size() + static_cast<std::size_t>(v);
  // explicit classes are in string order
  return mask[r];
}

Int NeighborhoodIndex::mask_weight(const std::vector<char>& mask) const {
  Int acc = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) acc += weights_[i];
  return acc;
}

VectorSet NeighborhoodIndex::mask_keys(const std::vector<char>& mask) const {
  std::vector<PowerSumKey> keys;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) keys.push_back(classes_[i]);
  return VectorSet(static_cast<std::size_t>(embedding_->degree()), std::move(keys));
}

namespace {

// Lexicographically smallest first-string among argmax candidates.
std::size_t lex_min_class(const NeighborhoodIndex& g, const std::vector<std::size_t>& candidates) {
  std::size_t best = candidates.front();
  for (std::size_t c : candidates)
    if (g.first_string(c) < g.first_string(best)) best = c;
  return best;
}

VectorSet sigma_g1_set(const NeighborhoodIndex& g, std::size_t x, const Caps& caps) {
  const std::size_t c = g.class_count();
  check_iteration_cap(static_cast<double>(c) * static_cast<double>(c), caps, "sigma(G1)");
  std::vector<PowerSumKey> class_keys;
  class_keys.reserve(c);
  for (std::size_t i = 0; i < c; ++i) class_keys.push_back(g.class_key(i));
  auto flat = detail::to_i64(class_keys, detail::i64_limit(2));
  std::size_t dim = class_keys.front().dimension();
  SumCollector collector(dim, flat.has_value());
  for (std::size_t y = 0; y < c; ++y) {
    for (std::size_t z = 0; z < c; ++z) {
      if (!g.adjacent(x, z) || !g.adjacent(y, z)) continue;
      if (collector.fast())
        collector.add_fast(flat->row(y), flat->row(z));
      else
        collector.add_slow(class_keys[y] + class_keys[z]);
    }
  }
  return collector.finish();
}

}  // namespace

PivotResult select_pivot(const NeighborhoodIndex& g, const Caps& caps) {
  const std::size_t c = g.class_count();
  if (c == 0 || g.graph_size() == 0) throw EmptyGraph();

  std::vector<Int> colmass(c, Int(0));
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t m = 0; m < c; ++m)
      if (g.adjacent(j, m)) colmass[m] += g.class_weight(j);
  }
  std::vector<Int> f(c, Int(0));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t m = 0; m < c; ++m)
      if (g.adjacent(i, m)) f[i] += g.class_weight(m) * colmass[m];
  }
  Int best = -1;
  for (std::size_t i = 0; i < c; ++i)
    if (f[i] > best) best = f[i];
  std::vector<std::size_t> argmax;
  for (std::size_t i = 0; i < c; ++i)
    if (f[i] == best) argmax.push_back(i);
  std::size_t x = lex_min_class(g, argmax);

  PivotResult out;
  out.x_class = x;
  out.x_string = g.first_string(x);
  out.g1_size = f[x];
  out.cs_lhs = f[x];
  out.cs_rhs_num = g.graph_size() * g.graph_size();
  Int strings = int_pow(Int(static_cast<unsigned long>(g.ground_size())),
                        static_cast<unsigned long>(g.half_arity()));
  out.cs_rhs_den = strings * strings;
  out.sigma_g1 = sigma_g1_set(g, x, caps);
  return out;
}

PivotResult select_pivot(const TupleGraph& g, const Caps& caps) {
  return select_pivot(NeighborhoodIndex::build(g, caps), caps);
}

PruneResult prune_y(const NeighborhoodIndex& g, std::size_t x_class, const Rat& alpha,
                    const PipelineParams& params, const Caps& caps) {
  const std::size_t c = g.class_count();
  const int s_cur = 2 * g.half_arity();
  const Rat n(static_cast<unsigned long>(g.ground_size()));
  PruneResult out;

  // Y = strings y with |R(y) cap R(x)| >= (alpha^2/4) N^{s/2 - 4 delta}
  Rat coef = alpha * alpha / 4;
  Rat expo = Rat(s_cur, 2) - 4 * params.delta;
  std::vector<Int> inter(c);
  out.y_mask.assign(c, 0);
  for (std::size_t y = 0; y < c; ++y) {
    inter[y] = g.intersection_weight(y, x_class);
    if (inter[y] > 0 && compare_power_product(Rat(inter[y]), {{coef, Rat(1)}, {n, expo}}) >= 0)
      out.y_mask[y] = 1;
  }
  out.y_size = g.mask_weight(out.y_mask);
  if (out.y_size == 0) throw EmptyStage("Y");

  // z in R(x) maximizing |{y in Y : yz in G1}|
  std::vector<Int> z_count(c, Int(0));
  for (std::size_t y = 0; y < c; ++y) {
    if (!out.y_mask[y]) continue;
    for (std::size_t m = 0; m < c; ++m)
      if (g.adjacent(x_class, m) && g.adjacent(y, m)) z_count[m] += g.class_weight(y);
  }
  Int best = -1;
  for (std::size_t m = 0; m < c; ++m)
    if (g.adjacent(x_class, m) && z_count[m] > best) best = z_count[m];
  if (best < 0) throw EmptyStage("Y1");
  std::vector<std::size_t> argmax;
  for (std::size_t m = 0; m < c; ++m)
    if (g.adjacent(x_class, m) && z_count[m] == best) argmax.push_back(m);
  out.z_class = lex_min_class(g, argmax);
  out.z_string = g.first_string(out.z_class);
  out.z_count = best;
  for (std::size_t y = 0; y < c; ++y)
    if (out.y_mask[y]) out.y_inter_mass += g.class_weight(y) * inter[y];
  out.rx_size = g.row_size(x_class);

  out.y1_mask.assign(c, 0);
  for (std::size_t y = 0; y < c; ++y)
    if (out.y_mask[y] && g.adjacent(y, out.z_class)) out.y1_mask[y] = 1;
  out.y1_size = g.mask_weight(out.y1_mask);
  if (out.y1_size == 0) throw EmptyStage("Y1");

  out.sigma_y1 = g.mask_keys(out.y1_mask);
  out.s1_threshold = Rat(out.y1_size, 2 * Int(static_cast<unsigned long>(out.sigma_y1.size())));
  out.s1_threshold.canonicalize();

  // r(Y1; n) aggregated by key (classes of explicit graphs can share keys)
  std::unordered_map<PowerSumKey, Int, PowerSumKeyHash> rep;
  for (std::size_t y = 0; y < c; ++y)
    if (out.y1_mask[y]) rep[g.class_key(y)] += g.class_weight(y);

  out.y2_mask.assign(c, 0);
  for (std::size_t y = 0; y < c; ++y)
    if (out.y1_mask[y] && Rat(rep[g.class_key(y)]) > out.s1_threshold) out.y2_mask[y] = 1;
  out.y2_size = g.mask_weight(out.y2_mask);
  if (out.y2_size == 0) throw EmptyStage("Y2");

  out.sigma_y2 = g.mask_keys(out.y2_mask);
  std::vector<char> rx_mask(c, 0);
  for (std::size_t m = 0; m < c; ++m)
    if (g.adjacent(x_class, m)) rx_mask[m] = 1;
  out.sigma_rx = g.mask_keys(rx_mask);

  // min over y in Y2 of |Sigma(R(y) cap R(x))|
  Int min_sigma = -1;
  for (std::size_t y = 0; y < c; ++y) {
    if (!out.y2_mask[y]) continue;
    std::vector<char> both(c, 0);
    for (std::size_t m = 0; m < c; ++m)
      if (g.adjacent(y, m) && g.adjacent(x_class, m)) both[m] = 1;
    Int size = Int(static_cast<unsigned long>(g.mask_keys(both).size()));
    if (min_sigma < 0 || size < min_sigma) min_sigma = size;
  }
  out.min_inter_sigma = min_sigma;
  (void)caps;
  return out;
}

PrebsgResult prebsg_split(const VectorSet& u, const VectorSet& v, const VectorSet& sigma_g1,
                          const Caps& caps) {
  if (u.size() == 0 || v.size() == 0) throw EmptyInput("prebsg_split: empty side");
  if (u.size() < v.size())
    throw std::invalid_argument("prebsg_split requires |U| >= |V| (apply the swap rule)");

  const std::size_t vs = v.size();
  const std::size_t r = (u.size() + vs - 1) / vs;
  std::vector<std::vector<PowerSumKey>> blocks(r);
  for (std::size_t i = 0; i < u.size(); ++i) blocks[i / vs].push_back(u.members()[i]);

  Int best_energy = -1;
  std::size_t best_block = 0;
  for (std::size_t i = 0; i < r; ++i) {
    Int e = detail::pair_energy(blocks[i], v.members(), caps, "prebsg block energy");
    if (e > best_energy) {
      best_energy = e;
      best_block = i;
    }
  }

  std::vector<PowerSumKey> z2 = blocks[best_block];
  if (z2.size() < vs) {
    // pad the trailing block from the front of U, in canonical order
    for (std::size_t i = 0; i < u.size() && z2.size() < vs; ++i) {
      if (i / vs != best_block) z2.push_back(u.members()[i]);
    }
  }

  PrebsgResult out;
  out.z1 = v;
  out.z2 = VectorSet(u.dimension(), std::move(z2));
  out.block_count = static_cast<int>(r);
  out.chosen_block = static_cast<int>(best_block);
  out.energy = detail::pair_energy(out.z1.members(), out.z2.members(), caps, "prebsg energy");

  check_iteration_cap(static_cast<double>(u.size()) * static_cast<double>(v.size()), caps,
                      "prebsg restricted mass");
  Int mass = 0;
  for (const auto& a : u.members())
    for (const auto& b : v.members())
      if (sigma_g1.contains(a + b)) ++mass;
  out.restricted_mass = mass;
  return out;
}

namespace {

BsgConstants bsg_constants(const Rat& alpha) {
  BsgConstants out;
  out.alpha = alpha;
  double a = alpha.get_d();
  double log_term = std::log(32.0 / a);
  out.c1 = 3.0 / std::pow(2.0, 19) * std::pow(a, 3) / log_term;
  out.c2 = std::pow(2.0, 45) / 3.0 * log_term / std::pow(a, 7);
  return out;
}

BsgCertification certify_s2(const std::vector<PowerSumKey>& s2, std::size_t n1,
                            const BsgConstants& constants, const Rat& epsilon, const Caps& caps) {
  BsgCertification cert;
  cert.constants = constants;
  cert.s2_size = Int(static_cast<unsigned long>(s2.size()));
  cert.s2_doubling = detail::pair_sumset_size(s2, s2, caps, "bsg doubling");

  Rat n1r(static_cast<unsigned long>(n1));
  bool size_ok =
      compare_power_product(Rat(cert.s2_size), {{n1r, Rat(1) - epsilon / 5}}) >= 0;
  bool doubling_ok =
      compare_power_product(Rat(cert.s2_doubling), {{Rat(cert.s2_size), Rat(1) + epsilon / 2}}) <= 0;
  cert.pipeline_form_holds = size_ok && doubling_ok;

  double sz = cert.s2_size.get_d();
  double db = cert.s2_doubling.get_d();
  double n1d = static_cast<double>(n1);
  cert.constant_form_holds =
      sz + 1e-9 >= constants.c1 * n1d && db <= constants.c2 * n1d + 1e-9;
  return cert;
}

}  // namespace

BsgResult bsg_extract(const VectorSet& z1, const VectorSet& z2, const Rat& alpha,
                      const Rat& epsilon, const Caps& caps) {
  if (z1.size() == 0 || z2.size() == 0) throw EmptyInput("bsg_extract: empty input");
  if (z1.size() != z2.size()) throw std::invalid_argument("bsg_extract requires |Z1| = |Z2|");

  Int energy = detail::pair_energy(z1.members(), z2.members(), caps, "bsg energy");
  Int n1 = Int(static_cast<unsigned long>(z1.size()));
  if (Rat(energy) < alpha * Rat(n1 * n1 * n1))
    throw HypothesisViolated("E(Z1,Z2) = " + to_decimal(energy) + " < alpha |Z1|^3");

  BsgConstants constants = bsg_constants(alpha);

  // Representation structure of Z1 + Z2: key id -> count and the Z1 indices
  // participating in each key.
  const auto& m1 = z1.members();
  const auto& m2 = z2.members();
  std::unordered_map<PowerSumKey, std::uint32_t, PowerSumKeyHash> key_ids;
  std::vector<std::uint32_t> counts;
  std::vector<std::vector<std::uint32_t>> participants;
  check_iteration_cap(static_cast<double>(m1.size()) * static_cast<double>(m2.size()), caps,
                      "bsg representation table");
  for (std::uint32_t i = 0; i < m1.size(); ++i) {
    for (std::uint32_t j = 0; j < m2.size(); ++j) {
      PowerSumKey sum = m1[i] + m2[j];
      auto [it, inserted] = key_ids.emplace(std::move(sum), counts.size());
      if (inserted) {
        counts.push_back(0);
        participants.emplace_back();
      }
      counts[it->second] += 1;
      participants[it->second].push_back(i);
    }
  }

  // Candidate popularity cutoffs: distinct representation counts, descending.
  std::vector<std::uint32_t> levels(counts.begin(), counts.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // keys grouped by count so each level activates its keys once
  std::vector<std::uint32_t> keys_by_count(counts.size());
  for (std::uint32_t kid = 0; kid < counts.size(); ++kid) keys_by_count[kid] = kid;
  std::sort(keys_by_count.begin(), keys_by_count.end(),
            [&](std::uint32_t a, std::uint32_t b) { return counts[a] > counts[b]; });

  std::vector<std::uint64_t> part(m1.size(), 0);
  std::uint64_t mass = 0;
  std::size_t next_key = 0;

  std::optional<BsgResult> best;
  std::unordered_set<std::string> seen_masks;

  for (std::uint32_t level : levels) {
    while (next_key < keys_by_count.size() && counts[keys_by_count[next_key]] >= level) {
      std::uint32_t kid = keys_by_count[next_key];
      for (std::uint32_t zi : participants[kid]) part[zi] += 1;
      mass += counts[kid];
      ++next_key;
    }
    // S2(level) = {z : part(z) >= (mass / |Z1|) / 2}
    std::string mask(m1.size(), '0');
    std::vector<PowerSumKey> members;
    for (std::size_t i = 0; i < m1.size(); ++i) {
      if (2 * part[i] * m1.size() >= mass) {
        mask[i] = '1';
        members.push_back(m1[i]);
      }
    }
    if (members.empty()) continue;
    if (!seen_masks.insert(mask).second) continue;

    BsgCertification cert = certify_s2(members, m1.size(), constants, epsilon, caps);
    BsgResult candidate{VectorSet(z1.dimension(), std::move(members)), cert};
    if (!best || candidate.cert.score() > best->cert.score()) best = std::move(candidate);
    if (best->cert.pipeline_form_holds && best->cert.constant_form_holds) break;
  }
  best->cert.candidates_scored = static_cast<int>(seen_masks.size());

  if (!best->cert.pipeline_form_holds && z1.size() <= 20) {
    auto fallback = bsg_exhaustive_best(z1, alpha, epsilon, caps);
    if (fallback) {
      fallback->cert.candidates_scored = best->cert.candidates_scored;
      best = std::move(fallback);
    }
  }
  return *best;
}

std::optional<BsgResult> bsg_exhaustive_best(const VectorSet& z1, const Rat& alpha,
                                             const Rat& epsilon, const Caps& caps) {
  const auto& m1 = z1.members();
  const std::size_t n = m1.size();
  if (n == 0 || n > 20) return std::nullopt;
  BsgConstants constants = bsg_constants(alpha);
  Rat n1r(static_cast<unsigned long>(n));

  for (std::size_t size = n; size >= 1; --size) {
    // sizes below |Z1|^{1 - eps/5} can never certify
    if (compare_power_product(Rat(static_cast<unsigned long>(size)),
                              {{n1r, Rat(1) - epsilon / 5}}) < 0)
      break;
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    for (;;) {
      std::vector<PowerSumKey> members;
      members.reserve(size);
      for (std::size_t i : pick) members.push_back(m1[i]);
      BsgCertification cert = certify_s2(members, n, constants, epsilon, caps);
      if (cert.pipeline_form_holds) {
        cert.exhausted = true;
        return BsgResult{VectorSet(z1.dimension(), std::move(members)), cert};
      }
      // next combination
      std::size_t pos = size;
      while (pos > 0 && pick[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t i = pos; i < size; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
  return std::nullopt;
}

FinalizeResult finalize_extraction(const NeighborhoodIndex& g, const std::vector<char>& y1_mask,
                                   const VectorSet& s2, const PipelineParams& params,
                                   const Rat& alpha, const Caps& caps) {
  if (s2.size() == 0) throw EmptyInput("finalize_extraction: empty S2");
  const std::size_t c = g.class_count();
  FinalizeResult out;
  out.y3_mask.assign(c, 0);
  for (std::size_t y = 0; y < c; ++y)
    if (y1_mask[y] && s2.contains(g.class_key(y))) out.y3_mask[y] = 1;
  out.y3_size = g.mask_weight(out.y3_mask);
  if (out.y3_size == 0) throw EmptyStage("Y3");

  const int h = g.half_arity();
  const std::size_t n = g.ground_size();
  const MomentEmbedding& e = g.embedding();

  std::vector<Int> sources;
  if (h == 1) {
    out.w_string = {};
    for (std::size_t cl = 0; cl < c; ++cl)
      if (out.y3_mask[cl]) sources.push_back(e.ground().at(
          static_cast<std::size_t>(g.first_string(cl)[0])));
    out.w_count = Int(static_cast<unsigned long>(sources.size()));
  } else {
    check_iteration_cap(std::pow(static_cast<double>(n), h), caps, "w-string enumeration");
    std::vector<int> odo(static_cast<std::size_t>(h - 1), 0);
    std::vector<int> best_w;
    Int best_count = -1;
    bool more = true;
    std::vector<int> full(static_cast<std::size_t>(h), 0);
    while (more) {
      Int count = 0;
      std::copy(odo.begin(), odo.end(), full.begin());
      for (std::size_t ai = 0; ai < n; ++ai) {
        full.back() = static_cast<int>(ai);
        if (g.string_in_classes(full, out.y3_mask)) ++count;
      }
      if (count > best_count) {
        best_count = count;
        best_w = odo;
      }
      more = false;
      for (std::size_t pos = odo.size(); pos-- > 0;) {
        if (++odo[pos] < static_cast<int>(n)) {
          more = true;
          break;
        }
        odo[pos] = 0;
      }
    }
    out.w_string = best_w;
    out.w_count = best_count;
    std::copy(best_w.begin(), best_w.end(), full.begin());
    for (std::size_t ai = 0; ai < n; ++ai) {
      full.back() = static_cast<int>(ai);
      if (g.string_in_classes(full, out.y3_mask)) sources.push_back(e.ground().at(ai));
    }
  }
  out.a_prime = make_ground_set(std::move(sources));

  // l-fold certifications on A'
  MomentEmbedding prime_embedding = moment_embed(out.a_prime, params.k);
  Rat aprime_size(static_cast<unsigned long>(out.a_prime.size()));
  for (int l : params.l_list) {
    LFoldCert cert;
    cert.l = l;
    cert.lfold_size =
        Int(static_cast<unsigned long>(moment_sumset(prime_embedding, l, caps).size()));
    Rat lk = Rat(l) + Rat(params.k) * Rat(params.k);
    Rat e_alpha = -(Rat(1) + 2 * params.epsilon * lk);
    Rat e_size = half_kk(params.k) * (Rat(1) + params.epsilon * lk);
    std::vector<PowerTerm> bound{{alpha, e_alpha}, {aprime_size, e_size}};
    cert.lhs_log10 = log10_int(cert.lfold_size);
    cert.rhs_log10 = log10_power_product(bound);
    cert.holds = compare_power_product(Rat(cert.lfold_size), bound) <= 0;
    out.certifications.push_back(cert);
  }
  return out;
}

namespace {

void push_record(ExtractionTrace& trace, std::string stage, std::string name,
                 std::string relation, std::string kind, bool holds,
                 std::optional<std::string> lhs_exact, std::optional<std::string> rhs_exact,
                 std::optional<double> lhs_log10, std::optional<double> rhs_log10,
                 std::string witness = "") {
  IneqRecord rec;
  rec.stage = std::move(stage);
  rec.name = std::move(name);
  rec.relation = std::move(relation);
  rec.kind = std::move(kind);
  rec.holds = holds;
  rec.lhs_exact = std::move(lhs_exact);
  rec.rhs_exact = std::move(rhs_exact);
  rec.lhs_log10 = lhs_log10;
  rec.rhs_log10 = rhs_log10;
  rec.witness = std::move(witness);
  trace.records.push_back(std::move(rec));
}

// Record lhs >= coef * N^expo with exact decision and log10 sides.
void push_power_lower(ExtractionTrace& trace, const std::string& stage, const std::string& name,
                      const std::string& kind, const Int& lhs, const Rat& coef, const Rat& base,
                      const Rat& expo) {
  std::vector<PowerTerm> terms{{coef, Rat(1)}, {base, expo}};
  bool holds = lhs > 0 && compare_power_product(Rat(lhs), terms) >= 0;
  push_record(trace, stage, name, ">=", kind, holds, to_decimal(lhs), std::nullopt,
              lhs > 0 ? std::optional<double>(log10_int(lhs)) : std::nullopt,
              log10_power_product(terms));
}

std::vector<Int> string_values(const MomentEmbedding& e, const std::vector<int>& str) {
  std::vector<Int> out;
  out.reserve(str.size());
  for (int idx : str) out.push_back(e.ground().at(static_cast<std::size_t>(idx)));
  return out;
}

}  // namespace

bool ExtractionTrace::all_asserts_hold() const {
  for (const auto& r : records)
    if (r.kind == "assert" && !r.holds) return false;
  return true;
}

ExtractionTrace run_pipeline(const GroundSet& a, const PipelineParams& params, const Caps& caps) {
  params.validate();
  ExtractionTrace trace;
  trace.params = params;
  const int k = params.k;
  const Rat n(static_cast<unsigned long>(a.size()));
  const Rat eps = params.epsilon;
  const Rat delta = params.delta;

  try {
    auto ps = popular_sums(a, params.s, k, std::nullopt, caps);
    trace.stats = ps.stats;
    const Rat alpha = ps.popular.alpha;

    // Hypothesis log(1/alpha) <= eps k(k+1)/43200 log N, decided exactly as
    // alpha >= N^{-eps k(k+1)/43200}.
    {
      Rat expo = -eps * Rat(k * (k + 1), 43200);
      trace.hypothesis.holds =
          a.size() < 2 || compare_power_product(alpha, {{n, expo}}) >= 0;
      trace.hypothesis.lhs_log10 = -log10_rat(alpha);
      trace.hypothesis.rhs_log10 =
          a.size() < 2 ? 0.0 : eps.get_d() * k * (k + 1) / 43200.0 * log10_rat(n);
      if (a.size() >= 2 && alpha < 1) {
        trace.hypothesis.eps_threshold =
            -log10_rat(alpha) * 43200.0 / (k * (k + 1) * log10_rat(n));
      } else {
        trace.hypothesis.eps_threshold = 0.0;
      }
    }

    // G-build
    Int s_size(static_cast<unsigned long>(ps.popular.sums.size()));
    push_record(trace, "G-build", "sum_r_over_S_equals_G", "=", "assert", true,
                to_decimal(ps.graph.size()), to_decimal(ps.graph.size()), std::nullopt,
                std::nullopt);
    push_record(trace, "G-build", "sigma_G_equals_S", "=", "assert",
                ps.graph.target().size() == ps.popular.sums.size(), to_decimal(s_size),
                to_decimal(s_size), std::nullopt, std::nullopt);
    {
      Rat bound = Rat(4) / alpha *
                  Rat(int_pow(Int(n.get_num()), static_cast<unsigned long>(k * (k + 1) / 2)));
      push_record(trace, "G-build", "S_size_bound", "<=", "assert", Rat(s_size) <= bound,
                  to_decimal(s_size), to_decimal(bound), std::nullopt, std::nullopt);
    }
    push_power_lower(trace, "G-build", "G_size_lower", "conditional", ps.graph.size(), alpha / 2,
                     n, Rat(params.s) - delta);

    // odd arity reduction
    TupleGraph graph = ps.graph;
    if (params.s % 2 == 1) {
      Int before = graph.size();
      graph = reduce_odd_s(graph, caps);
      push_record(trace, "G-build", "odd_reduction_density", ">=", "assert",
                  graph.size() * Int(n.get_num()) >= before, to_decimal(graph.size()),
                  to_decimal(before) + "/" + to_decimal(Int(n.get_num())), std::nullopt,
                  std::nullopt, "arity " + std::to_string(params.s) + " -> " +
                                    std::to_string(graph.arity()));
    }
    const int s_cur = graph.arity();

    NeighborhoodIndex index = NeighborhoodIndex::build(graph, caps);
    PivotResult pivot = select_pivot(index, caps);
    trace.pivot_x = string_values(index.embedding(), pivot.x_string);

    push_record(trace, "pivot-x", "pivot_cauchy_schwarz", ">=", "assert",
                pivot.cs_lhs * pivot.cs_rhs_den >= pivot.cs_rhs_num, to_decimal(pivot.cs_lhs),
                to_decimal(pivot.cs_rhs_num) + "/" + to_decimal(pivot.cs_rhs_den), std::nullopt,
                std::nullopt);
    // independent recomputation of |G1| through the row route
    {
      Int direct = 0;
      for (std::size_t y = 0; y < index.class_count(); ++y)
        direct += index.class_weight(y) * index.intersection_weight(y, pivot.x_class);
      push_record(trace, "G1", "G1_identity", "=", "assert", direct == pivot.g1_size,
                  to_decimal(pivot.g1_size), to_decimal(direct), std::nullopt, std::nullopt);
    }
    push_power_lower(trace, "G1", "G1_size_lower", "conditional", pivot.g1_size,
                     alpha * alpha / 4, n, Rat(s_cur) - 2 * delta);

    PruneResult prune = prune_y(index, pivot.x_class, alpha, params, caps);
    trace.z_pick = string_values(index.embedding(), prune.z_string);

    push_power_lower(trace, "Y", "Y_size_lower", "conditional", prune.y_size, alpha * alpha / 4,
                     n, Rat(s_cur, 2) - 4 * delta);
    push_record(trace, "z-pick", "z_pigeonhole", ">=", "assert",
                prune.z_count * prune.rx_size >= prune.y_inter_mass, to_decimal(prune.z_count),
                to_decimal(prune.y_inter_mass) + "/" + to_decimal(prune.rx_size), std::nullopt,
                std::nullopt);
    push_power_lower(trace, "Y1", "Y1_size_lower", "conditional", prune.y1_size,
                     rat_pow(alpha, 4) / 16, n, Rat(s_cur, 2) - 8 * delta);
    push_record(trace, "S1", "S1_size_vs_threshold", "defn", "recorded", true,
                to_decimal(Int(static_cast<unsigned long>(prune.sigma_y2.size()))),
                to_decimal(prune.s1_threshold), std::nullopt, std::nullopt,
                "|S1| with r(Y1;n) > |Y1|/(2|Sigma(Y1)|)");
    push_record(trace, "Y2", "Y2_at_least_half_Y1", ">=", "assert",
                2 * prune.y2_size >= prune.y1_size, to_decimal(prune.y2_size),
                to_decimal(prune.y1_size) + "/2", std::nullopt, std::nullopt);
    push_power_lower(trace, "Y2", "Y2_size_lower", "conditional", prune.y2_size,
                     rat_pow(alpha, 4) / 32, n, Rat(s_cur, 2) - 8 * delta);

    Int sigma_g1_size(static_cast<unsigned long>(pivot.sigma_g1.size()));
    auto sigma_lower = [&](const std::string& stage, const std::string& name, const Int& lhs,
                           const Rat& expo) {
      std::vector<PowerTerm> terms{{Rat(sigma_g1_size), expo}};
      bool holds = lhs > 0 && compare_power_product(Rat(lhs), terms) >= 0;
      push_record(trace, stage, name, ">=", "conditional", holds, to_decimal(lhs), std::nullopt,
                  lhs > 0 ? std::optional<double>(log10_int(lhs)) : std::nullopt,
                  log10_power_product(terms));
    };
    Rat sigma_expo = Rat(1) - eps / 1200;
    sigma_lower("Y2", "sigma_Y2_lower", Int(static_cast<unsigned long>(prune.sigma_y2.size())),
                sigma_expo);
    sigma_lower("Y2", "min_sigma_R_cap_lower", prune.min_inter_sigma, sigma_expo);
    sigma_lower("prebsg", "sigma_Rx_lower", Int(static_cast<unsigned long>(prune.sigma_rx.size())),
                sigma_expo);

    // swap rule: U is the larger of Sigma(Y2) and Sigma(R(x))
    bool u_is_y2 = prune.sigma_y2.size() >= prune.sigma_rx.size();
    const VectorSet& u_set = u_is_y2 ? prune.sigma_y2 : prune.sigma_rx;
    const VectorSet& v_set = u_is_y2 ? prune.sigma_rx : prune.sigma_y2;
    PrebsgResult prebsg = prebsg_split(u_set, v_set, pivot.sigma_g1, caps);

    Int z1_size(static_cast<unsigned long>(prebsg.z1.size()));
    push_record(trace, "prebsg", "prebsg_cauchy_schwarz", ">=", "assert",
                prebsg.energy * Int(prebsg.block_count) * Int(prebsg.block_count) *
                        sigma_g1_size >=
                    prebsg.restricted_mass * prebsg.restricted_mass,
                to_decimal(prebsg.energy), to_decimal(prebsg.restricted_mass) + "^2/(r^2 |Sigma(G1)|)",
                std::nullopt, std::nullopt,
                "r=" + std::to_string(prebsg.block_count) +
                    " j=" + std::to_string(prebsg.chosen_block) + (u_is_y2 ? " U=Sigma(Y2)" : " U=Sigma(Rx)"));
    {
      std::vector<PowerTerm> terms{{Rat(1, 4), Rat(1)}, {Rat(sigma_g1_size), Rat(3) - eps / 200}};
      push_record(trace, "prebsg", "prebsg_energy_lower", ">=", "conditional",
                  compare_power_product(Rat(prebsg.energy), terms) >= 0,
                  to_decimal(prebsg.energy), std::nullopt, log10_int(prebsg.energy),
                  log10_power_product(terms));
    }
    sigma_lower("Z1Z2", "Z1_lower", z1_size, sigma_expo);
    push_record(trace, "Z1Z2", "Z1_upper", "<=", "conditional", z1_size <= sigma_g1_size,
                to_decimal(z1_size), to_decimal(sigma_g1_size), std::nullopt, std::nullopt);

    // BSG on the Sigma(Y2)-side so S2 lands inside Sigma(Y2)
    const VectorSet& a_side = u_is_y2 ? prebsg.z2 : prebsg.z1;
    const VectorSet& b_side = u_is_y2 ? prebsg.z1 : prebsg.z2;
    Rat alpha_bsg(prebsg.energy, z1_size * z1_size * z1_size);
    alpha_bsg.canonicalize();
    BsgResult bsg = bsg_extract(a_side, b_side, alpha_bsg, eps, caps);

    push_record(trace, "bsg", "bsg_pipeline_form", "<=", "recorded",
                bsg.cert.pipeline_form_holds, to_decimal(bsg.cert.s2_doubling),
                to_decimal(bsg.cert.s2_size) + "^(1+eps/2)", std::nullopt, std::nullopt,
                "|S2|=" + to_decimal(bsg.cert.s2_size) +
                    (bsg.cert.exhausted ? " exhausted" : " popular-path"));
    push_record(trace, "bsg", "bsg_constant_form", "<=", "recorded", bsg.cert.constant_form_holds,
                to_decimal(bsg.cert.s2_doubling), "C2(alpha)|Z1|", std::nullopt, std::nullopt,
                "C1=" + format_float(bsg.cert.constants.c1) +
                    " C2=" + format_float(bsg.cert.constants.c2) + " log=natural");
    {
      bool inside = true;
      for (const auto& key : bsg.s2.members()) inside &= prune.sigma_y2.contains(key);
      push_record(trace, "S2", "S2_inside_sigma_Y2", "=", "assert", inside,
                  to_decimal(bsg.cert.s2_size),
                  "subset of " + std::to_string(prune.sigma_y2.size()), std::nullopt,
                  std::nullopt);
    }

    FinalizeResult fin = finalize_extraction(index, prune.y1_mask, bsg.s2, params, alpha, caps);
    trace.w_pick = string_values(index.embedding(), fin.w_string);

    // |Y3| > |S2| |Y1| / (2 |Sigma(Y1)|), unconditional since S2 popular sums
    Int sigma_y1_size(static_cast<unsigned long>(prune.sigma_y1.size()));
    push_record(trace, "Y3", "Y3_popularity_lower", ">", "assert",
                2 * sigma_y1_size * fin.y3_size > bsg.cert.s2_size * prune.y1_size,
                to_decimal(fin.y3_size),
                to_decimal(bsg.cert.s2_size) + "*" + to_decimal(prune.y1_size) + "/(2*" +
                    to_decimal(sigma_y1_size) + ")",
                std::nullopt, std::nullopt);
    {
      Rat expo = Rat(s_cur, 2) - 8 * delta - Rat(k * (k + 1)) * eps / 4;
      std::vector<PowerTerm> terms{{alpha, eps / 4}, {n, expo}};
      push_record(trace, "Y3", "Y3_size_lower", ">=", "conditional",
                  compare_power_product(Rat(fin.y3_size), terms) >= 0, to_decimal(fin.y3_size),
                  std::nullopt, log10_int(fin.y3_size), log10_power_product(terms));
    }

    Int aprime_size(static_cast<unsigned long>(fin.a_prime.size()));
    Int w_strings = int_pow(Int(n.get_num()), static_cast<unsigned long>(index.half_arity() - 1));
    push_record(trace, "w-pick", "w_pigeonhole", ">=", "assert",
                aprime_size * w_strings >= fin.y3_size, to_decimal(aprime_size),
                to_decimal(fin.y3_size) + "/" + to_decimal(w_strings), std::nullopt, std::nullopt);
    {
      Rat expo = Rat(1) - 8 * delta - Rat(k * (k + 1)) * eps / 4;
      std::vector<PowerTerm> terms{{alpha, eps / 4}, {n, expo}};
      push_record(trace, "Aprime", "Aprime_lower_chain", ">=", "conditional",
                  compare_power_product(Rat(aprime_size), terms) >= 0, to_decimal(aprime_size),
                  std::nullopt, log10_int(aprime_size), log10_power_product(terms));
    }
    {
      Rat expo = Rat(1) - eps * Rat(k) * Rat(k);
      std::vector<PowerTerm> terms{{alpha, eps / 4}, {n, expo}};
      push_record(trace, "Aprime", "Aprime_lower_target", ">=", "conditional",
                  compare_power_product(Rat(aprime_size), terms) >= 0, to_decimal(aprime_size),
                  std::nullopt, log10_int(aprime_size), log10_power_product(terms));
    }

    for (const auto& cert : fin.certifications) {
      push_record(trace, "certify", "lfold_bound_l" + std::to_string(cert.l), "<=", "recorded",
                  cert.holds, to_decimal(cert.lfold_size), std::nullopt, cert.lhs_log10,
                  cert.rhs_log10);
    }
    trace.certifications = fin.certifications;
    trace.a_prime = fin.a_prime;
  } catch (const EmptyStage& e) {
    trace.failed_stage = e.stage;
    trace.failure_message = e.what();
  } catch (const ResourceLimit& e) {
    trace.failed_stage = "resource-limit";
    trace.failure_message = e.what();
  }
  return trace;
}

}  // namespace vinolab
