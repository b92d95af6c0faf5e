#include <doctest.h>

#include "vinolab/ground_set.hpp"
#include "vinolab/json_io.hpp"
#include "vinolab/key.hpp"
#include "vinolab/rng.hpp"

using namespace vinolab;

namespace {

GroundSet gs(std::initializer_list<long> values) {
  std::vector<Int> raw;
  for (long v : values) raw.emplace_back(v);
  return make_ground_set(std::move(raw));
}

}  // namespace

TEST_CASE("make_ground_set sorts and validates") {
  GroundSet a = gs({3, 1, 2});
  CHECK(a.elements() == std::vector<Int>{1, 2, 3});
  CHECK(a.diameter() == 2);

  GroundSet single = gs({5});
  CHECK(single.size() == 1);
  CHECK(single.diameter() == 0);

  CHECK_THROWS_AS(gs({1, 1, 2}), DuplicateElement);
  CHECK_THROWS_AS(make_ground_set({}), EmptyInput);
}

TEST_CASE("moment embedding takes exact powers") {
  MomentEmbedding e = moment_embed(gs({1, 2, 3}), 2);
  REQUIRE(e.size() == 3);
  CHECK(e.key(0).components() == std::vector<Int>{1, 1});
  CHECK(e.key(1).components() == std::vector<Int>{2, 4});
  CHECK(e.key(2).components() == std::vector<Int>{3, 9});

  MomentEmbedding neg = moment_embed(gs({-2}), 3);
  CHECK(neg.key(0).components() == std::vector<Int>{-2, 4, -8});

  MomentEmbedding identity = moment_embed(gs({0, 1}), 1);
  CHECK(identity.key(0).components() == std::vector<Int>{0});
  CHECK(identity.key(1).components() == std::vector<Int>{1});
}

TEST_CASE("generators are deterministic and validated") {
  FamilySpec ap;
  ap.family = Family::Arithmetic;
  ap.start = 1;
  ap.step = 1;
  ap.cardinality = 5;
  CHECK(generate(ap).elements() == std::vector<Int>{1, 2, 3, 4, 5});

  FamilySpec gp;
  gp.family = Family::Geometric;
  gp.start = 1;
  gp.ratio = 2;
  gp.cardinality = 4;
  CHECK(generate(gp).elements() == std::vector<Int>{1, 2, 4, 8});

  FamilySpec random;
  random.family = Family::RandomSubset;
  random.range_lo = 1;
  random.range_hi = 100;
  random.cardinality = 10;
  random.seed = 42;
  GroundSet first = generate(random);
  GroundSet second = generate(random);
  CHECK(first.elements() == second.elements());
  CHECK(first.size() == 10);
  CHECK(first.elements().front() >= 1);
  CHECK(first.elements().back() <= 100);

  FamilySpec too_big = random;
  too_big.range_hi = 5;
  CHECK_THROWS_AS(generate(too_big), InvalidSpec);

  FamilySpec flat;
  flat.family = Family::Arithmetic;
  flat.step = 0;
  flat.cardinality = 3;
  CHECK_THROWS_AS(generate(flat), InvalidSpec);
}

TEST_CASE("well-spaced predicate holds literally for integer sets") {
  CHECK(well_spaced_literal(gs({-4, 0, 3, 9})));
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    FamilySpec spec;
    spec.family = Family::RandomSubset;
    spec.range_lo = -50;
    spec.range_hi = 120;
    spec.cardinality = 1 + rng.next_below(12);
    spec.seed = rng.next();
    CHECK(well_spaced_literal(generate(spec)));
  }
}

TEST_CASE("diameter exponent is recorded per set") {
  CHECK(!gs({7}).diameter_exponent().has_value());
  auto m = gs({1, 16}).diameter_exponent();
  REQUIRE(m.has_value());
  CHECK(*m == doctest::Approx(std::log(15.0) / std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("canonical key encoding is injective across signs and sizes") {
  SplitMix64 rng(11);
  std::vector<Int> values;
  for (long v : {0L, 1L, -1L, 127L, 128L, -128L, -129L, 255L, 256L, -32768L})
    values.emplace_back(v);
  for (int i = 0; i < 40; ++i) {
    Int v = rng.next_below(Int(1) << 80);
    values.push_back(v);
    values.push_back(-v);
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      bool equal_values = values[i] == values[j];
      bool equal_bytes = encode_twos_complement(values[i]) == encode_twos_complement(values[j]);
      CHECK(equal_values == equal_bytes);
    }
  }
}

TEST_CASE("set files round-trip big integers exactly") {
  Int big = (Int(1) << 100) + 7;
  GroundSet a = make_ground_set({big, -big, 3});
  Json j = ground_set_to_json(a);
  GroundSet back = parse_set_json(j);
  CHECK(back.elements() == a.elements());

  CHECK_THROWS_AS(parse_set_json(Json{{"elements", Json::array({1.5})}}), ConfigError);
  CHECK_THROWS_AS(parse_set_json(Json::array()), ConfigError);
  CHECK_THROWS_AS(parse_set_json(Json{{"elements", Json::array({"1", "1"})}}), DuplicateElement);
}
