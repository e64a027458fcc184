#pragma once
// Direct-enumeration reference computations shared by the unit tests.

#include <cmath>
#include <cstddef>
#include <vector>

#include "rlsw/wavelet.hpp"

namespace oracle {

// psi_j from the two-scale relations written out with explicit indices:
// phi_0 = delta, phi_j[n] = sum_m h[m] phi_{j-1}[n - 2^{j-1} m],
// psi_j[n] = sum_m g[m] phi_{j-1}[n - 2^{j-1} m].
inline std::vector<double> wavelet(const rlsw::WaveletFamily& f, int j) {
  const auto& h = f.low_pass();
  const auto& g = f.high_pass();
  std::vector<double> phi{1.0};
  auto step = [](const std::vector<double>& prev, const std::vector<double>& taps, long s) {
    const long len = static_cast<long>(prev.size()) + (static_cast<long>(taps.size()) - 1) * s;
    std::vector<double> out(static_cast<std::size_t>(len), 0.0);
    for (long n = 0; n < len; ++n) {
      double acc = 0.0;
      for (long m = 0; m < static_cast<long>(taps.size()); ++m) {
        const long i = n - s * m;
        if (i >= 0 && i < static_cast<long>(prev.size())) acc += taps[m] * prev[i];
      }
      out[static_cast<std::size_t>(n)] = acc;
    }
    return out;
  };
  for (int level = 1; level < j; ++level) phi = step(phi, h, 1L << (level - 1));
  return step(phi, g, 1L << (j - 1));
}

// sum_k a[k] b[k - tau]
inline double correlate(const std::vector<double>& a, const std::vector<double>& b, long tau) {
  double s = 0.0;
  for (long k = 0; k < static_cast<long>(a.size()); ++k) {
    const long i = k - tau;
    if (i >= 0 && i < static_cast<long>(b.size())) s += a[k] * b[i];
  }
  return s;
}

// d_{j,k} = sum_t x_t psi_j[k - t] with t taken modulo T, written as a
// double loop over t and every wrap of the filter support.
inline std::vector<double> ndwt(const std::vector<double>& x, const rlsw::WaveletFamily& f, int J) {
  const long T = static_cast<long>(x.size());
  std::vector<double> out(static_cast<std::size_t>(J) * x.size(), 0.0);
  for (int j = 1; j <= J; ++j) {
    const auto psi = wavelet(f, j);
    const long L = static_cast<long>(psi.size());
    for (long k = 0; k < T; ++k) {
      double acc = 0.0;
      for (long t = 0; t < T; ++t) {
        for (long m = ((k - t) % T + T) % T; m < L; m += T) acc += x[t] * psi[m];
      }
      out[static_cast<std::size_t>((j - 1) * T + k)] = acc;
    }
  }
  return out;
}

// Haar autocorrelation wavelet in closed form.
inline double haar_Psi(int j, long tau) {
  const double a = std::abs(static_cast<double>(tau));
  const double s = std::ldexp(1.0, j);
  if (a <= s / 2) return 1.0 - 3.0 * a / s;
  if (a <= s) return a / s - 1.0;
  return 0.0;
}

}  // namespace oracle
