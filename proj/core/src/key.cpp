#include "vinolab/key.hpp"

#include <stdexcept>

#include "vinolab/errors.hpp"

namespace vinolab {

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string encode_twos_complement(const Int& v) {
  std::string payload;
  if (v == 0) {
    payload.push_back('\0');
  } else if (v > 0) {
    std::size_t count = 0;
    std::size_t bytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    payload.resize(bytes);
    mpz_export(payload.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    payload.resize(count);
    if (static_cast<unsigned char>(payload[0]) >= 0x80) payload.insert(payload.begin(), '\0');
  } else {
    // Least L with v >= -2^{8L-1}; then 2^{8L} + v occupies exactly L bytes
    // with the sign bit set.
    Int mag = -v;
    std::size_t len = mpz_sizeinbase(mag.get_mpz_t(), 2) / 8 + 1;
    while (len > 1 && mag <= (Int(1) << (8 * (len - 1) - 1))) --len;
    Int wrapped = (Int(1) << (8 * len)) + v;
    std::size_t count = 0;
    payload.resize(len);
    mpz_export(payload.data(), &count, 1, 1, 1, 0, wrapped.get_mpz_t());
    payload.resize(count);
  }
  std::string out;
  std::uint32_t n = static_cast<std::uint32_t>(payload.size());
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
  out += payload;
  return out;
}

PowerSumKey::PowerSumKey(std::vector<Int> components) : components_(std::move(components)) {
  encoded_.reserve(components_.size() * 12);
  for (const auto& c : components_) encoded_ += encode_twos_complement(c);
  hash_ = fnv1a(encoded_);
}

PowerSumKey PowerSumKey::operator+(const PowerSumKey& other) const {
  if (dimension() != other.dimension()) throw DimensionMismatch();
  std::vector<Int> out(dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = components_[i] + other.components_[i];
  return PowerSumKey(std::move(out));
}

PowerSumKey PowerSumKey::operator-(const PowerSumKey& other) const {
  if (dimension() != other.dimension()) throw DimensionMismatch();
  std::vector<Int> out(dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = components_[i] - other.components_[i];
  return PowerSumKey(std::move(out));
}

PowerSumKey PowerSumKey::negated() const {
  std::vector<Int> out(dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -components_[i];
  return PowerSumKey(std::move(out));
}

bool PowerSumKey::operator<(const PowerSumKey& other) const {
  std::size_t n = std::min(dimension(), other.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(components_[i], other.components_[i]);
    if (c != 0) return c < 0;
  }
  return dimension() < other.dimension();
}

std::vector<std::string> PowerSumKey::to_decimal_strings() const {
  std::vector<std::string> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(to_decimal(c));
  return out;
}

}  // namespace vinolab
