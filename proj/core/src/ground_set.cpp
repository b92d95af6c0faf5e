#include "vinolab/ground_set.hpp"

#include <algorithm>

#include "vinolab/rng.hpp"

namespace vinolab {

Int GroundSet::diameter() const {
  if (elements_.empty()) return 0;
  return elements_.back() - elements_.front();
}

bool GroundSet::contains(const Int& v) const {
  return std::binary_search(elements_.begin(), elements_.end(), v);
}

std::optional<double> GroundSet::diameter_exponent() const {
  if (size() < 2) return std::nullopt;
  Int x = diameter();
  if (x < 2) return std::nullopt;
  return log10_int(x) / log10_int(Int(size()));
}

GroundSet make_ground_set(std::vector<Int> raw) {
  if (raw.empty()) throw EmptyInput("ground set must be non-empty");
  std::sort(raw.begin(), raw.end());
  for (std::size_t i = 1; i < raw.size(); ++i)
    if (raw[i] == raw[i - 1]) throw DuplicateElement(to_decimal(raw[i]));
  GroundSet out;
  out.elements_ = std::move(raw);
  return out;
}

bool well_spaced_literal(const GroundSet& a, const Caps& caps) {
  Int lo = a.elements().front() - 1;
  Int hi = a.elements().back();
  Int span = hi - lo + 1;
  if (!span.fits_ulong_p() || span.get_ui() > caps.iterations)
    throw ResourceLimit("well_spaced_literal over diameter " + to_decimal(span));
  const auto& e = a.elements();
  for (Int j = lo; j <= hi; ++j) {
    auto first = std::upper_bound(e.begin(), e.end(), j);
    auto last = std::upper_bound(e.begin(), e.end(), j + 1);
    if (last - first > 1) return false;
  }
  return true;
}

MomentEmbedding::MomentEmbedding(GroundSet ground, int degree)
    : ground_(std::move(ground)), degree_(degree) {
  points_.reserve(ground_.size());
  for (const auto& a : ground_.elements()) {
    std::vector<Int> coords(static_cast<std::size_t>(degree_));
    Int p = 1;
    for (int j = 0; j < degree_; ++j) {
      p *= a;
      coords[static_cast<std::size_t>(j)] = p;
    }
    points_.push_back(MomentPoint{PowerSumKey(std::move(coords)), a});
  }
}

MomentEmbedding moment_embed(const GroundSet& a, int k) {
  if (k < 1) throw std::invalid_argument("moment_embed: k must be >= 1");
  return MomentEmbedding(a, k);
}

GroundSet generate(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::Arithmetic: {
      if (spec.cardinality == 0) throw InvalidSpec("arithmetic family needs cardinality >= 1");
      if (spec.step == 0 && spec.cardinality > 1)
        throw InvalidSpec("arithmetic step 0 repeats elements");
      std::vector<Int> raw;
      raw.reserve(spec.cardinality);
      Int v = spec.start;
      for (std::size_t i = 0; i < spec.cardinality; ++i, v += spec.step) raw.push_back(v);
      return make_ground_set(std::move(raw));
    }
    case Family::Geometric: {
      if (spec.cardinality == 0) throw InvalidSpec("geometric family needs cardinality >= 1");
      if (spec.start == 0) throw InvalidSpec("geometric start must be nonzero");
      if ((spec.ratio == 1 || spec.ratio == 0 || spec.ratio == -1) && spec.cardinality > 2)
        throw InvalidSpec("geometric ratio " + to_decimal(spec.ratio) + " repeats elements");
      std::vector<Int> raw;
      raw.reserve(spec.cardinality);
      Int v = spec.start;
      for (std::size_t i = 0; i < spec.cardinality; ++i, v *= spec.ratio) raw.push_back(v);
      try {
        return make_ground_set(std::move(raw));
      } catch (const DuplicateElement&) {
        throw InvalidSpec("geometric parameters repeat elements");
      }
    }
    case Family::RandomSubset: {
      if (spec.cardinality == 0) throw InvalidSpec("random-subset needs cardinality >= 1");
      if (spec.range_hi < spec.range_lo) throw InvalidSpec("empty range");
      Int range = spec.range_hi - spec.range_lo + 1;
      if (range < Int(static_cast<unsigned long>(spec.cardinality)))
        throw InvalidSpec("cardinality exceeds range size");
      // Floyd's sampling: n draws, no rejection loop over collisions.
      SplitMix64 rng(spec.seed);
      std::vector<Int> picked;
      picked.reserve(spec.cardinality);
      Int n = Int(static_cast<unsigned long>(spec.cardinality));
      for (Int j = range - n; j < range; ++j) {
        Int t = rng.next_below(j + 1);
        Int candidate = spec.range_lo + t;
        bool seen = false;
        for (const auto& p : picked)
          if (p == candidate) {
            seen = true;
            break;
          }
        picked.push_back(seen ? spec.range_lo + j : candidate);
      }
      return make_ground_set(std::move(picked));
    }
    case Family::Explicit:
      if (spec.elements.empty()) throw InvalidSpec("explicit family needs elements");
      return make_ground_set(spec.elements);
  }
  throw InvalidSpec("unknown family");
}

}  // namespace vinolab
