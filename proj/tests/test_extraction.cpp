#include <doctest.h>

#include "vinolab/extraction.hpp"
#include "vinolab/json_io.hpp"
#include "vinolab/rng.hpp"

using namespace vinolab;

namespace {

GroundSet gs(std::initializer_list<long> values) {
  std::vector<Int> raw;
  for (long v : values) raw.emplace_back(v);
  return make_ground_set(std::move(raw));
}

GroundSet interval(long n) {
  std::vector<Int> raw;
  for (long v = 1; v <= n; ++v) raw.emplace_back(v);
  return make_ground_set(std::move(raw));
}

PowerSumKey key(std::initializer_list<long> values) {
  std::vector<Int> comps;
  for (long v : values) comps.emplace_back(v);
  return PowerSumKey(std::move(comps));
}

VectorSet ints(std::initializer_list<long> values) {
  std::vector<Int> raw;
  for (long v : values) raw.emplace_back(v);
  return VectorSet::from_integers(raw);
}

PipelineParams params62() {
  PipelineParams p;
  p.s = 6;
  p.k = 2;
  p.epsilon = Rat(1, 10);
  p.delta = Rat(1, 100);
  p.l_list = {2};
  return p;
}

}  // namespace

TEST_CASE("popular sums on the two-point toy set") {
  auto ps = popular_sums(gs({0, 1}), 2, 1);
  CHECK(ps.stats.j == 6);
  CHECK(ps.popular.alpha == Rat(3, 4));
  CHECK(ps.popular.threshold == Rat(3, 4));
  CHECK(ps.popular.sums.size() == 3);  // every count 1,2,1 clears 3/4
  CHECK(ps.graph.size() == 4);
  CHECK(ps.graph.target().size() == ps.popular.sums.size());
}

TEST_CASE("popular sums: singleton and alpha override") {
  auto single = popular_sums(gs({7}), 3, 2);
  CHECK(single.popular.sums.size() == 1);
  CHECK(single.graph.size() == 1);

  auto forced = popular_sums(gs({1, 2, 3}), 3, 2, Rat(1));
  CHECK(forced.popular.threshold == Rat(1, 2));
  CHECK(forced.popular.sums.size() == 10);  // all realized triples
  CHECK(forced.graph.size() == 27);         // the full cube

  CHECK_THROWS_AS(popular_sums(gs({1, 2, 3}), 3, 2, Rat(3, 2)), DegenerateAlpha);
  CHECK_THROWS_AS(popular_sums(gs({1, 2, 3}), 3, 2, Rat(0)), DegenerateAlpha);
}

TEST_CASE("odd arity reduces to the densest section") {
  auto ps = popular_sums(gs({0, 1}), 3, 1);
  TupleGraph g3 = ps.graph;
  REQUIRE(g3.arity() == 3);
  Int before = g3.size();
  TupleGraph g2 = reduce_odd_s(g3);
  CHECK(g2.arity() == 2);
  CHECK(g2.size() * Int(2) >= before);

  auto e = std::make_shared<MomentEmbedding>(moment_embed(gs({0, 1}), 1));
  TupleGraph one = TupleGraph::explicit_graph(e, 3, {{0, 1, 1}});
  TupleGraph reduced = reduce_odd_s(one);
  CHECK(reduced.arity() == 2);
  CHECK(reduced.size() == 1);
  CHECK(reduced.tuples() == std::vector<std::vector<int>>{{0, 1}});
}

TEST_CASE("pivot selection on complete graphs") {
  auto e01 = std::make_shared<MomentEmbedding>(moment_embed(gs({0, 1}), 1));
  PivotResult p = select_pivot(TupleGraph::complete(e01, 2));
  CHECK(p.g1_size == 4);
  CHECK(p.x_string == std::vector<int>{0});
  CHECK(p.cs_lhs * p.cs_rhs_den >= p.cs_rhs_num);
  CHECK(p.cs_lhs == 4);
  CHECK(p.cs_rhs_num == 16);
  CHECK(p.cs_rhs_den == 4);  // equality case

  auto e123 = std::make_shared<MomentEmbedding>(moment_embed(gs({1, 2, 3}), 2));
  PivotResult q = select_pivot(TupleGraph::complete(e123, 2));
  CHECK(q.g1_size == 9);
  CHECK(q.cs_lhs == 9);
  CHECK(q.cs_rhs_num == 81);
  CHECK(q.cs_rhs_den == 9);
}

TEST_CASE("pivot avoids strings with empty neighbourhoods") {
  auto e = std::make_shared<MomentEmbedding>(moment_embed(gs({0, 1}), 1));
  // R(0) is empty, R(1) = {0, 1}
  TupleGraph g = TupleGraph::explicit_graph(e, 2, {{1, 0}, {1, 1}});
  PivotResult p = select_pivot(g);
  CHECK(p.x_string == std::vector<int>{1});
  CHECK(p.g1_size == 2);
}

TEST_CASE("prune keeps both strings of the toy complete graph") {
  auto ps = popular_sums(gs({0, 1}), 2, 1);
  NeighborhoodIndex index = NeighborhoodIndex::build(ps.graph);
  PivotResult pivot = select_pivot(index);
  PipelineParams p;
  p.s = 2;
  p.k = 1;
  p.epsilon = Rat(1, 10);
  p.delta = Rat(1, 100);
  PruneResult prune = prune_y(index, pivot.x_class, ps.popular.alpha, p);
  CHECK(prune.y_size == 2);  // thresholds fall below 1
  CHECK(prune.y1_size >= 1);
  CHECK(2 * prune.y2_size >= prune.y1_size);
}

TEST_CASE("prune reports an empty stage for an impossible threshold") {
  auto ps = popular_sums(gs({0, 1}), 2, 1);
  NeighborhoodIndex index = NeighborhoodIndex::build(ps.graph);
  PivotResult pivot = select_pivot(index);
  PipelineParams p;
  p.s = 2;
  p.k = 1;
  p.epsilon = Rat(1, 10);
  p.delta = Rat(1, 100);
  CHECK_THROWS_AS(prune_y(index, pivot.x_class, Rat(1000), p), EmptyStage);
  try {
    prune_y(index, pivot.x_class, Rat(1000), p);
  } catch (const EmptyStage& e) {
    CHECK(e.stage == "Y");
  }
}

TEST_CASE("prebsg split blocks and certificates") {
  VectorSet u = ints({0, 1, 2});
  VectorSet sigma = ints({0, 1, 2, 3, 4});  // the full support of U + V
  PrebsgResult r = prebsg_split(u, u, sigma);
  CHECK(r.block_count == 1);
  CHECK(r.z1.members() == u.members());
  CHECK(r.z2.members() == u.members());
  CHECK(r.energy == 19);
  CHECK(r.restricted_mass == 9);
  CHECK(r.energy * Int(r.block_count) * Int(r.block_count) *
            Int(static_cast<unsigned long>(sigma.size())) >=
        r.restricted_mass * r.restricted_mass);

  VectorSet point = ints({4});
  PrebsgResult single = prebsg_split(point, point, ints({8}));
  CHECK(single.energy == 1);

  VectorSet u6 = ints({0, 1, 2, 3, 4, 5});
  VectorSet v3 = ints({0, 1, 2});
  PrebsgResult split = prebsg_split(u6, v3, ints({0, 1, 2, 3, 4, 5, 6, 7}));
  CHECK(split.block_count == 2);
  CHECK(split.chosen_block == 0);  // both blocks have energy 19; ties go first
  CHECK(split.z2.members() == v3.members());
  CHECK(split.energy == 19);

  CHECK_THROWS_AS(prebsg_split(v3, u6, sigma), std::invalid_argument);
}

TEST_CASE("bsg extraction certifies the eight-term progression") {
  VectorSet ap8 = ints({0, 1, 2, 3, 4, 5, 6, 7});
  BsgResult res = bsg_extract(ap8, ap8, Rat(344, 512), Rat(62, 100));
  CHECK(res.cert.pipeline_form_holds);
  CHECK(res.cert.s2_size == 8);
  CHECK(res.cert.s2_doubling == 15);

  VectorSet one = ints({3});
  BsgResult single = bsg_extract(one, one, Rat(1), Rat(1, 2));
  CHECK(single.cert.s2_size == 1);
  CHECK(single.cert.s2_doubling == 1);
  CHECK(single.cert.pipeline_form_holds);

  CHECK_THROWS_AS(bsg_extract(ap8, ap8, Rat(1), Rat(1, 2)), HypothesisViolated);
}

TEST_CASE("bsg: exhaustive fallback never beats the returned candidate") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    FamilySpec spec;
    spec.family = Family::RandomSubset;
    spec.range_lo = 0;
    spec.range_hi = 30;
    spec.cardinality = 2 + rng.next_below(7);
    spec.seed = rng.next();
    GroundSet a = generate(spec);
    VectorSet z = VectorSet::from_integers(a.elements());
    Int e = additive_energy(z.members(), z.members());
    Rat alpha(e, int_pow(Int(static_cast<unsigned long>(z.size())), 3));
    alpha.canonicalize();
    BsgResult returned = bsg_extract(z, z, alpha, Rat(7, 10));
    auto exhaustive = bsg_exhaustive_best(z, alpha, Rat(7, 10));
    if (exhaustive) CHECK(exhaustive->cert.score() <= returned.cert.score());
  }
}

TEST_CASE("pipeline completes on the 12-point interval") {
  ExtractionTrace trace = run_pipeline(interval(12), params62());
  CHECK(trace.completed());
  CHECK(trace.all_asserts_hold());
  REQUIRE(trace.a_prime.has_value());
  CHECK(trace.a_prime->size() >= 1);
  REQUIRE(trace.certifications.size() == 1);
  CHECK(trace.certifications[0].l == 2);
  CHECK(trace.certifications[0].lfold_size >= 1);

  // regression values fixed by the documented tie-breaks
  CHECK(trace.stats.j == Int("6830335752"));
  CHECK(trace.a_prime->size() == 12);
  CHECK(trace.pivot_x == std::vector<Int>{2, 7, 9});
  CHECK(trace.z_pick == std::vector<Int>{2, 7, 9});
  CHECK(trace.w_pick == std::vector<Int>{3, 8});
  CHECK(trace.certifications[0].lfold_size == 78);

  ExtractionTrace again = run_pipeline(interval(12), params62());
  CHECK(dump_canonical(trace_to_json(trace)) == dump_canonical(trace_to_json(again)));

  // records appear in pipeline stage order
  std::vector<std::string> order{"G-build", "pivot-x", "G1",   "Y",  "z-pick", "Y1",
                                 "S1",      "Y2",      "prebsg", "Z1Z2", "bsg", "S2",
                                 "Y3",      "w-pick",  "Aprime", "certify"};
  auto rank = [&](const std::string& stage) {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == stage) return i;
    return order.size();
  };
  std::size_t prev = 0;
  for (const auto& r : trace.records) {
    std::size_t cur = rank(r.stage);
    CHECK(cur < order.size());
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("pipeline handles singletons and odd arity") {
  PipelineParams sp;
  sp.s = 2;
  sp.k = 1;
  sp.epsilon = Rat(1, 10);
  sp.delta = Rat(1, 1000);
  sp.l_list = {2, 3};
  ExtractionTrace single = run_pipeline(gs({7}), sp);
  CHECK(single.completed());
  CHECK(single.all_asserts_hold());
  REQUIRE(single.a_prime.has_value());
  CHECK(single.a_prime->size() == 1);
  for (const auto& cert : single.certifications) CHECK(cert.lfold_size == 1);

  PipelineParams odd = params62();
  odd.s = 7;
  ExtractionTrace ot = run_pipeline(interval(8), odd);
  CHECK(ot.completed());
  CHECK(ot.all_asserts_hold());
  bool saw_reduction = false;
  for (const auto& r : ot.records)
    if (r.name == "odd_reduction_density") saw_reduction = r.holds;
  CHECK(saw_reduction);
}

TEST_CASE("toy pipeline on {0,1} uses the degenerate empty w") {
  PipelineParams p;
  p.s = 2;
  p.k = 1;
  p.epsilon = Rat(1, 10);
  p.delta = Rat(1, 1000);
  p.l_list = {2};
  ExtractionTrace trace = run_pipeline(gs({0, 1}), p);
  CHECK(trace.completed());
  CHECK(trace.all_asserts_hold());
  CHECK(trace.w_pick.empty());
  REQUIRE(trace.a_prime.has_value());
  CHECK(trace.a_prime->size() >= 1);
}

TEST_CASE("classic k=1 s=2 regime extracts the whole progression") {
  PipelineParams p;
  p.s = 2;
  p.k = 1;
  p.epsilon = Rat(1, 10);
  p.delta = Rat(1, 1000);
  p.l_list = {2, 3};
  std::vector<Int> raw;
  for (long v = 0; v < 16; ++v) raw.emplace_back(v);
  ExtractionTrace trace = run_pipeline(make_ground_set(std::move(raw)), p);
  CHECK(trace.completed());
  CHECK(trace.all_asserts_hold());
  REQUIRE(trace.a_prime.has_value());
  CHECK(trace.a_prime->size() == 16);
  REQUIRE(trace.certifications.size() == 2);
  CHECK(trace.certifications[0].lfold_size == 31);  // 2A of a 16-term progression
  CHECK(trace.certifications[1].lfold_size == 46);  // 3A
  CHECK(trace.certifications[0].holds);
  CHECK(trace.certifications[1].holds);
}

TEST_CASE("out-of-reach regimes surface as structured empty-stage traces") {
  // At N = 4, k = 3 the computed alpha is far above 1 and the Y threshold
  // exceeds the trivial maximum, so the stage comes out empty.
  PipelineParams p;
  p.s = 12;
  p.k = 3;
  p.epsilon = Rat(1, 20);
  p.delta = Rat(1, 2000);
  p.l_list = {2};
  ExtractionTrace trace = run_pipeline(interval(4), p);
  CHECK(!trace.completed());
  REQUIRE(trace.failed_stage.has_value());
  CHECK(*trace.failed_stage == "Y");
  CHECK(trace.all_asserts_hold());  // everything recorded up to the failure holds
  CHECK(!trace.a_prime.has_value());
  CHECK(trace.records.size() >= 5);

  ExtractionTrace again = run_pipeline(interval(4), p);
  CHECK(dump_canonical(trace_to_json(trace)) == dump_canonical(trace_to_json(again)));
}

TEST_CASE("pipeline validates parameters") {
  PipelineParams bad = params62();
  bad.s = 5;  // below k(k+1)
  CHECK_THROWS_AS(run_pipeline(interval(8), bad), std::invalid_argument);
  PipelineParams bad2 = params62();
  bad2.delta = Rat(1, 2);  // above epsilon
  CHECK_THROWS_AS(run_pipeline(interval(8), bad2), std::invalid_argument);
  CHECK(PipelineParams::default_delta(Rat(1, 10)) == Rat(1, 1000));
  CHECK(PipelineParams::default_delta(Rat(1)) == Rat(1, 100));
}
