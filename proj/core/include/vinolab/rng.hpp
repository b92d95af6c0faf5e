#pragma once

#include <cstdint>

#include "vinolab/numeric.hpp"

namespace vinolab {

// splitmix64: tiny, portable, byte-identical across platforms. Standard
// library distributions are implementation-defined, so all sampling in the
// library goes through this.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform big integer in [0, bound) by chunked rejection; bound > 0.
  Int next_below(const Int& bound) {
    if (bound <= 0) return 0;
    if (bound.fits_ulong_p()) return Int(next_below(bound.get_ui()));
    std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    std::size_t words = (bits + 63) / 64;
    for (;;) {
      Int r = 0;
      for (std::size_t i = 0; i < words; ++i) {
        r <<= 64;
        r += Int(next());
      }
      r >>= (words * 64 - bits);
      if (r < bound) return r;
    }
  }

private:
  std::uint64_t state_;
};

}  // namespace vinolab
