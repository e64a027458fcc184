#pragma once

#include <cstddef>

namespace rlsw::detail {

// Windowed mean along an axis of n blocks of `inner` contiguous doubles,
// repeated over `outer` slabs. Window [i-M, i+M] clipped to [0, n) and
// renormalized. Terms are added in ascending offset order.
void window_mean(const double* in, double* out, std::size_t outer, std::size_t n,
                 std::size_t inner, int M);

// For each of `rows` rows: dst[row*(ie-ib) + (i-ib)] = mean of
// src[row*src_stride + (i' - origin)] over i' in [i-M, i+M] clipped to [0, n),
// for i in [ib, ie).
void window_mean_rows(const double* src, std::size_t src_stride, std::size_t origin,
                      std::size_t rows, std::size_t n, std::size_t ib, std::size_t ie, int M,
                      double* dst);

// Number of terms in the clipped window around i.
inline std::size_t window_count(std::size_t i, std::size_t n, int M) {
  const long lo = static_cast<long>(i) - M < 0 ? 0 : static_cast<long>(i) - M;
  const long hi = static_cast<long>(i) + M > static_cast<long>(n) - 1 ? static_cast<long>(n) - 1
                                                                      : static_cast<long>(i) + M;
  return static_cast<std::size_t>(hi - lo + 1);
}

}  // namespace rlsw::detail
