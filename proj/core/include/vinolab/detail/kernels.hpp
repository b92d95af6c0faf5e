#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "vinolab/errors.hpp"
#include "vinolab/key.hpp"

// Exact bulk kernels over k-vectors. When every component fits well inside
// 64 bits the work runs on flat int64 rows (sort + scan); otherwise the same
// algorithms run on PowerSumKeys. Results are identical by construction.
namespace vinolab::detail {

struct I64Rows {
  std::size_t dim = 0;
  std::vector<std::int64_t> flat;  // row-major

  std::size_t size() const { return dim == 0 ? 0 : flat.size() / dim; }
  const std::int64_t* row(std::size_t i) const { return flat.data() + i * dim; }
};

// Magnitude bound such that sums of `terms` components stay below 2^62.
inline std::int64_t i64_limit(unsigned terms) {
  return (std::int64_t{1} << 62) / static_cast<std::int64_t>(terms);
}

std::optional<I64Rows> to_i64(const std::vector<PowerSumKey>& keys, std::int64_t limit);

void sort_unique(I64Rows& rows);
void sort_rows(I64Rows& rows);

std::vector<PowerSumKey> from_i64(const I64Rows& rows);

// Sorted deduplicated {a + b : a in A, b in B}. A Caps check guards the
// |A|*|B| enumeration.
std::vector<PowerSumKey> pair_sumset(const std::vector<PowerSumKey>& a,
                                     const std::vector<PowerSumKey>& b, const Caps& caps,
                                     const char* where);

// |{a + b}| without materializing keys on the fast path.
Int pair_sumset_size(const std::vector<PowerSumKey>& a, const std::vector<PowerSumKey>& b,
                     const Caps& caps, const char* where);

// Additive energy: sum over n of r(A,B;n)^2 with r the ordered-pair count.
Int pair_energy(const std::vector<PowerSumKey>& a, const std::vector<PowerSumKey>& b,
                const Caps& caps, const char* where);

// True iff all |A||B| cross sums are pairwise distinct.
bool all_sums_distinct(const std::vector<PowerSumKey>& a, const std::vector<PowerSumKey>& b,
                       const Caps& caps, const char* where);

}  // namespace vinolab::detail
