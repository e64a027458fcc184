// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernels/kernels_internal.hpp"

namespace rlsw::kernels::detail {
namespace {

void axpy_avx2(double alpha, const double* x, double* out, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(out + i);
    __m256d y1 = _mm256_loadu_pd(out + i + 4);
    y0 = _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), y0);
    y1 = _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), y1);
    _mm256_storeu_pd(out + i, y0);
    _mm256_storeu_pd(out + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i),
                                              _mm256_loadu_pd(out + i)));
  }
  for (; i < n; ++i) out[i] = std::fma(alpha, x[i], out[i]);
}

void add_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i),
                                            _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] += x[i];
}

void circular_filter_avx2(const double* in, double* out, std::size_t n,
                          const double* taps, std::size_t ntaps,
                          std::size_t stride) {
  std::size_t i = 0;
  const __m256d zero = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, zero);
  for (; i < n; ++i) out[i] = 0.0;
  for (std::size_t m = 0; m < ntaps; ++m) {
    const std::size_t s = (stride * m) % n;
    axpy_avx2(taps[m], in, out + s, n - s);
    axpy_avx2(taps[m], in + (n - s), out, s);
  }
}

void circular_filter_adjoint_add_avx2(const double* in, double* out,
                                      std::size_t n, const double* taps,
                                      std::size_t ntaps, std::size_t stride) {
  for (std::size_t m = 0; m < ntaps; ++m) {
    const std::size_t s = (stride * m) % n;
    axpy_avx2(taps[m], in + s, out, n - s);
    axpy_avx2(taps[m], in, out + (n - s), s);
  }
}

void multiply_avx2(const double* a, const double* b, double* out,
                   std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void mix_rows_avx2(const double* w, std::size_t rows, const double* in,
                   double* out, std::size_t n) {
  // Blocked over i so that each output block stays in registers.
  constexpr std::size_t kBlock = 16;
  std::size_t i0 = 0;
  for (; i0 + kBlock <= n; i0 += kBlock) {
    for (std::size_t j = 0; j < rows; ++j) {
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      __m256d acc2 = _mm256_setzero_pd();
      __m256d acc3 = _mm256_setzero_pd();
      for (std::size_t l = 0; l < rows; ++l) {
        const __m256d c = _mm256_set1_pd(w[j * rows + l]);
        const double* src = in + l * n + i0;
        acc0 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src), acc0);
        acc1 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src + 4), acc1);
        acc2 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src + 8), acc2);
        acc3 = _mm256_fmadd_pd(c, _mm256_loadu_pd(src + 12), acc3);
      }
      double* dst = out + j * n + i0;
      _mm256_storeu_pd(dst, acc0);
      _mm256_storeu_pd(dst + 4, acc1);
      _mm256_storeu_pd(dst + 8, acc2);
      _mm256_storeu_pd(dst + 12, acc3);
    }
  }
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = i0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t l = 0; l < rows; ++l) {
        acc = std::fma(w[j * rows + l], in[l * n + i], acc);
      }
      out[j * n + i] = acc;
    }
  }
}

void coherence_ratio_avx2(const double* num, const double* a, const double* b,
                          double floor, double* out, std::size_t n) {
  constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
  const __m256d f = _mm256_set1_pd(floor);
  const __m256d missing = _mm256_set1_pd(kMissing);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(va, f, _CMP_GT_OQ),
                                     _mm256_cmp_pd(vb, f, _CMP_GT_OQ));
    const __m256d r = _mm256_div_pd(_mm256_loadu_pd(num + i),
                                    _mm256_sqrt_pd(_mm256_mul_pd(va, vb)));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(missing, r, ok));
  }
  for (; i < n; ++i) {
    out[i] = (a[i] > floor && b[i] > floor) ? num[i] / std::sqrt(a[i] * b[i])
                                            : kMissing;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      "avx2",
      circular_filter_avx2,
      circular_filter_adjoint_add_avx2,
      multiply_avx2,
      axpy_avx2,
      add_avx2,
      mix_rows_avx2,
      coherence_ratio_avx2,
  };
  return table;
}

}  // namespace rlsw::kernels::detail
