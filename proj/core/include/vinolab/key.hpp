#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vinolab/numeric.hpp"

namespace vinolab {

// The exact integer k-vector (n_1, ..., n_k) keying every counting table.
// Canonical encoding: per component, minimal big-endian two's complement,
// length-prefixed; injective across signs and magnitudes. The encoding and
// its hash are cached at construction since keys are immutable.
class PowerSumKey {
public:
  PowerSumKey() = default;
  explicit PowerSumKey(std::vector<Int> components);

  const std::vector<Int>& components() const { return components_; }
  std::size_t dimension() const { return components_.size(); }
  const std::string& encoded() const { return encoded_; }
  std::size_t hash() const { return hash_; }

  PowerSumKey operator+(const PowerSumKey& other) const;
  PowerSumKey operator-(const PowerSumKey& other) const;
  PowerSumKey negated() const;

  bool operator==(const PowerSumKey& other) const { return encoded_ == other.encoded_; }
  bool operator!=(const PowerSumKey& other) const { return !(*this == other); }

  // Numeric lexicographic order on components; ties broken by dimension.
  // This is the canonical order used for every serialized set.
  bool operator<(const PowerSumKey& other) const;

  std::vector<std::string> to_decimal_strings() const;

private:
  std::vector<Int> components_;
  std::string encoded_;
  std::size_t hash_ = 0;
};

// Minimal big-endian two's-complement bytes of v, 4-byte length prefix.
std::string encode_twos_complement(const Int& v);

struct PowerSumKeyHash {
  std::size_t operator()(const PowerSumKey& k) const { return k.hash(); }
};

}  // namespace vinolab
