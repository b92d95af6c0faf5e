#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vinolab/errors.hpp"
#include "vinolab/key.hpp"
#include "vinolab/numeric.hpp"

namespace vinolab {

// A finite set of exact integers, strictly increasing. Distinct integers
// are automatically well-spaced, so every spacing hypothesis downstream is
// checkable and every count exact.
class GroundSet {
public:
  GroundSet() = default;

  const std::vector<Int>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const Int& at(std::size_t i) const { return elements_[i]; }
  Int diameter() const;  // X_A = max - min, 0 for singletons
  bool contains(const Int& v) const;
  bool contains_zero() const { return contains(Int(0)); }

  // log X_A / log N, the per-set diameter exponent m_emp; nullopt when the
  // ratio is undefined (N < 2 or X_A < 2).
  std::optional<double> diameter_exponent() const;

private:
  friend GroundSet make_ground_set(std::vector<Int> raw);
  std::vector<Int> elements_;
};

// Sorts and validates; duplicates are an error rather than a silent dedupe
// since multiset inputs would change every solution count.
GroundSet make_ground_set(std::vector<Int> raw);

// Literal evaluation of the well-spaced predicate |A cap (j, j+1]| <= 1
// over j in [min-1, max]. Always true for integer sets; exists so the
// hypothesis can be checked as stated. Iteration is capped.
bool well_spaced_literal(const GroundSet& a, const Caps& caps = default_caps());

struct MomentPoint {
  PowerSumKey coords;  // (a, a^2, ..., a^k)
  Int source;          // the generating element a
};

// The lift a -> (a, a^2, ..., a^k), in ground order.
class MomentEmbedding {
public:
  MomentEmbedding() = default;
  MomentEmbedding(GroundSet ground, int degree);

  const GroundSet& ground() const { return ground_; }
  int degree() const { return degree_; }
  const std::vector<MomentPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const PowerSumKey& key(std::size_t i) const { return points_[i].coords; }

private:
  GroundSet ground_;
  int degree_ = 0;
  std::vector<MomentPoint> points_;
};

MomentEmbedding moment_embed(const GroundSet& a, int k);

enum class Family { Arithmetic, Geometric, RandomSubset, Explicit };

struct FamilySpec {
  Family family = Family::Arithmetic;
  Int start = 0;
  Int step = 1;       // arithmetic
  Int ratio = 2;      // geometric
  Int range_lo = 0;   // random-subset
  Int range_hi = 0;
  std::size_t cardinality = 0;
  std::uint64_t seed = 0;
  std::vector<Int> elements;  // explicit
};

// Deterministic: a pure function of its FamilySpec. Random subsets are
// uniform without-replacement samples of [range_lo, range_hi] driven by the
// seed.
GroundSet generate(const FamilySpec& spec);

}  // namespace vinolab
