#include <cmath>
#include <limits>

#include "kernels/kernels_internal.hpp"

namespace rlsw::kernels {
namespace {

void axpy_scalar(double alpha, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += alpha * x[i];
}

void add_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += x[i];
}

void circular_filter_scalar(const double* in, double* out, std::size_t n,
                            const double* taps, std::size_t ntaps,
                            std::size_t stride) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t m = 0; m < ntaps; ++m) {
    const std::size_t s = (stride * m) % n;
    axpy_scalar(taps[m], in, out + s, n - s);
    axpy_scalar(taps[m], in + (n - s), out, s);
  }
}

void circular_filter_adjoint_add_scalar(const double* in, double* out,
                                        std::size_t n, const double* taps,
                                        std::size_t ntaps, std::size_t stride) {
  for (std::size_t m = 0; m < ntaps; ++m) {
    const std::size_t s = (stride * m) % n;
    axpy_scalar(taps[m], in + s, out, n - s);
    axpy_scalar(taps[m], in, out + (n - s), s);
  }
}

void multiply_scalar(const double* a, const double* b, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mix_rows_scalar(const double* w, std::size_t rows, const double* in,
                     double* out, std::size_t n) {
  for (std::size_t j = 0; j < rows; ++j) {
    double* dst = out + j * n;
    for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
    for (std::size_t l = 0; l < rows; ++l) {
      axpy_scalar(w[j * rows + l], in + l * n, dst, n);
    }
  }
}

void coherence_ratio_scalar(const double* num, const double* a,
                            const double* b, double floor, double* out,
                            std::size_t n) {
  constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (a[i] > floor && b[i] > floor) ? num[i] / std::sqrt(a[i] * b[i])
                                            : kMissing;
  }
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{
      "scalar",
      circular_filter_scalar,
      circular_filter_adjoint_add_scalar,
      multiply_scalar,
      axpy_scalar,
      add_scalar,
      mix_rows_scalar,
      coherence_ratio_scalar,
  };
  return table;
}

}  // namespace rlsw::kernels
