#include "vinolab/detail/kernels.hpp"

#include <cstring>

namespace vinolab::detail {

namespace {

struct RowLess {
  std::size_t dim;
  const std::int64_t* base;
  bool operator()(std::uint32_t a, std::uint32_t b) const {
    const std::int64_t* ra = base + std::size_t{a} * dim;
    const std::int64_t* rb = base + std::size_t{b} * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      if (ra[i] != rb[i]) return ra[i] < rb[i];
    }
    return false;
  }
};

bool row_eq(const std::int64_t* a, const std::int64_t* b, std::size_t dim) {
  return std::memcmp(a, b, dim * sizeof(std::int64_t)) == 0;
}

void sort_impl(I64Rows& rows, bool dedupe) {
  std::size_t n = rows.size();
  if (n < 2) return;
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), RowLess{rows.dim, rows.flat.data()});
  std::vector<std::int64_t> out;
  out.reserve(rows.flat.size());
  const std::int64_t* prev = nullptr;
  for (std::uint32_t idx : order) {
    const std::int64_t* r = rows.row(idx);
    if (dedupe && prev != nullptr && row_eq(prev, r, rows.dim)) continue;
    out.insert(out.end(), r, r + rows.dim);
    prev = out.data() + out.size() - rows.dim;
  }
  rows.flat = std::move(out);
}

I64Rows cross_sums(const I64Rows& a, const I64Rows& b) {
  I64Rows out;
  out.dim = a.dim;
  out.flat.resize(a.flat.size() * b.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t* ra = a.row(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::int64_t* rb = b.row(j);
      for (std::size_t d = 0; d < a.dim; ++d) out.flat[pos++] = ra[d] + rb[d];
    }
  }
  return out;
}

void check_pair_cap(std::size_t na, std::size_t nb, const Caps& caps, const char* where) {
  check_iteration_cap(static_cast<double>(na) * static_cast<double>(nb), caps, where);
  check_table_cap(static_cast<std::uint64_t>(
                      std::min<double>(static_cast<double>(na) * static_cast<double>(nb), 1e19)),
                  caps, where);
}

std::vector<PowerSumKey> mpz_cross_sorted(const std::vector<PowerSumKey>& a,
                                          const std::vector<PowerSumKey>& b) {
  std::vector<PowerSumKey> sums;
  sums.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) sums.push_back(x + y);
  std::sort(sums.begin(), sums.end());
  return sums;
}

}  // namespace

std::optional<I64Rows> to_i64(const std::vector<PowerSumKey>& keys, std::int64_t limit) {
  I64Rows out;
  if (keys.empty()) return out;
  out.dim = keys.front().dimension();
  out.flat.reserve(keys.size() * out.dim);
  for (const auto& k : keys) {
    if (k.dimension() != out.dim) throw DimensionMismatch();
    for (const auto& c : k.components()) {
      if (!c.fits_slong_p()) return std::nullopt;
      std::int64_t v = c.get_si();
      if (v > limit || v < -limit) return std::nullopt;
      out.flat.push_back(v);
    }
  }
  return out;
}

void sort_unique(I64Rows& rows) { sort_impl(rows, true); }
void sort_rows(I64Rows& rows) { sort_impl(rows, false); }

std::vector<PowerSumKey> from_i64(const I64Rows& rows) {
  std::vector<PowerSumKey> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::int64_t* r = rows.row(i);
    std::vector<Int> comps(rows.dim);
    for (std::size_t d = 0; d < rows.dim; ++d) comps[d] = Int(static_cast<long>(r[d]));
    out.push_back(PowerSumKey(std::move(comps)));
  }
  return out;
}

std::vector<PowerSumKey> pair_sumset(const std::vector<PowerSumKey>& a,
                                     const std::vector<PowerSumKey>& b, const Caps& caps,
                                     const char* where) {
  if (a.empty() || b.empty()) return {};
  check_pair_cap(a.size(), b.size(), caps, where);
  std::int64_t limit = i64_limit(2);
  auto fa = to_i64(a, limit);
  auto fb = to_i64(b, limit);
  if (fa && fb) {
    I64Rows sums = cross_sums(*fa, *fb);
    sort_unique(sums);
    return from_i64(sums);
  }
  auto sums = mpz_cross_sorted(a, b);
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return sums;
}

Int pair_sumset_size(const std::vector<PowerSumKey>& a, const std::vector<PowerSumKey>& b,
                     const Caps& caps, const char* where) {
  if (a.empty() || b.empty()) return 0;
  check_pair_cap(a.size(), b.size(), caps, where);
  std::int64_t limit = i64_limit(2);
  auto fa = to_i64(a, limit);
  auto fb = to_i64(b, limit);
  if (fa && fb) {
    I64Rows sums = cross_sums(*fa, *fb);
    sort_unique(sums);
    return Int(static_cast<unsigned long>(sums.size()));
  }
  auto sums = mpz_cross_sorted(a, b);
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return Int(static_cast<unsigned long>(sums.size()));
}

Int pair_energy(const std::vector<PowerSumKey>& a, const std::vector<PowerSumKey>& b,
                const Caps& caps, const char* where) {
  if (a.empty() || b.empty()) return 0;
  check_pair_cap(a.size(), b.size(), caps, where);
  std::int64_t limit = i64_limit(2);
  auto fa = to_i64(a, limit);
  auto fb = to_i64(b, limit);
  Int energy = 0;
  if (fa && fb) {
    I64Rows sums = cross_sums(*fa, *fb);
    sort_rows(sums);
    std::size_t i = 0, n = sums.size();
    while (i < n) {
      std::size_t j = i + 1;
      while (j < n && row_eq(sums.row(i), sums.row(j), sums.dim)) ++j;
      std::uint64_t run = j - i;
      energy += Int(run) * Int(run);
      i = j;
    }
    return energy;
  }
  auto sums = mpz_cross_sorted(a, b);
  std::size_t i = 0, n = sums.size();
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && sums[j] == sums[i]) ++j;
    std::uint64_t run = j - i;
    energy += Int(run) * Int(run);
    i = j;
  }
  return energy;
}

bool all_sums_distinct(const std::vector<PowerSumKey>& a, const std::vector<PowerSumKey>& b,
                       const Caps& caps, const char* where) {
  if (a.empty() || b.empty()) return true;
  check_pair_cap(a.size(), b.size(), caps, where);
  std::int64_t limit = i64_limit(2);
  auto fa = to_i64(a, limit);
  auto fb = to_i64(b, limit);
  if (fa && fb) {
    I64Rows sums = cross_sums(*fa, *fb);
    sort_rows(sums);
    for (std::size_t i = 1; i < sums.size(); ++i)
      if (row_eq(sums.row(i - 1), sums.row(i), sums.dim)) return false;
    return true;
  }
  auto sums = mpz_cross_sorted(a, b);
  for (std::size_t i = 1; i < sums.size(); ++i)
    if (sums[i - 1] == sums[i]) return false;
  return true;
}

}  // namespace vinolab::detail
