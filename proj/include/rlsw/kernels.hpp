#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2/FMA variant. The variant is picked
// once per process from CPUID; set RLSW_FORCE_SCALAR=1 to pin the scalar
// path. Variants agree to rounding (FMA contraction), not bit for bit, so a
// given machine always uses one table for the lifetime of the process.

#include <cstddef>

namespace rlsw::kernels {

struct KernelTable {
  const char* name;

  // out[k] = sum_m taps[m] * in[(k - stride*m) mod n]
  void (*circular_filter)(const double* in, double* out, std::size_t n,
                          const double* taps, std::size_t ntaps,
                          std::size_t stride);

  // out[k] += sum_m taps[m] * in[(k + stride*m) mod n]   (adjoint of the above)
  void (*circular_filter_adjoint_add)(const double* in, double* out,
                                      std::size_t n, const double* taps,
                                      std::size_t ntaps, std::size_t stride);

  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, double* out,
                   std::size_t n);

  // out[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* out, std::size_t n);

  // out[i] += x[i]
  void (*add)(const double* x, double* out, std::size_t n);

  // out[row*n + i] = sum_l w[row*rows + l] * in[l*n + i], rows x rows weights
  void (*mix_rows)(const double* w, std::size_t rows, const double* in,
                   double* out, std::size_t n);

  // out[i] = num[i] / sqrt(a[i]*b[i]) when a[i] > floor and b[i] > floor,
  // quiet NaN otherwise.
  void (*coherence_ratio)(const double* num, const double* a, const double* b,
                          double floor, double* out, std::size_t n);
};

const KernelTable& scalar();

/// AVX2/FMA table, or nullptr when not compiled in or unsupported by the CPU.
const KernelTable* avx2();

/// The table used by the library.
const KernelTable& active();

}  // namespace rlsw::kernels
