#include "rlsw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlsw/error.hpp"
#include "rlsw/kernels.hpp"
#include "smoothing_internal.hpp"

namespace rlsw {
namespace {

void require_raw(const PeriodogramField& f) {
  if (f.kind != PeriodogramKind::Raw) {
    throw ConfigError(std::string("smoothing expects a raw periodogram, got ") + to_string(f.kind));
  }
}

void check_window(int M, std::size_t R, const char* what, const char* axis) {
  if (M < 0 || static_cast<std::size_t>(2 * M + 1) > R) {
    throw ConfigError(std::string(what) + "=" + std::to_string(M) + " gives a window of " +
                      std::to_string(2 * M + 1) + " which exceeds " + axis + "=" +
                      std::to_string(R));
  }
}

}  // namespace

namespace detail {

void window_mean(const double* in, double* out, std::size_t outer, std::size_t n,
                 std::size_t inner, int M) {
  const auto& K = kernels::active();
  const std::size_t slab = n * inner;
  const long m = M;
  const long nn = static_cast<long>(n);
  const long in_stride = static_cast<long>(inner);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = in + o * slab;
    double* dst = out + o * slab;
    std::fill(dst, dst + slab, 0.0);
    for (long s = -m; s <= m; ++s) {
      const long i0 = std::max(0L, -s);
      const long i1 = std::min(nn, nn - s);
      if (i1 <= i0) continue;
      K.add(src + (i0 + s) * in_stride, dst + i0 * in_stride,
            static_cast<std::size_t>(i1 - i0) * inner);
    }
    for (long i = 0; i < nn; ++i) {
      const double count = static_cast<double>(window_count(static_cast<std::size_t>(i), n, M));
      double* b = dst + i * in_stride;
      for (std::size_t q = 0; q < inner; ++q) b[q] /= count;
    }
  }
}

void window_mean_rows(const double* src, std::size_t src_stride, std::size_t origin,
                      std::size_t rows, std::size_t n, std::size_t ib, std::size_t ie, int M,
                      double* dst) {
  const auto& K = kernels::active();
  const std::size_t w = ie - ib;
  const long m = M;
  const long nn = static_cast<long>(n);
  const long b0 = static_cast<long>(ib);
  const long b1 = static_cast<long>(ie);
  const long org = static_cast<long>(origin);
  for (std::size_t row = 0; row < rows; ++row) {
    const double* s_row = src + row * src_stride;
    double* d_row = dst + row * w;
    std::fill(d_row, d_row + w, 0.0);
    for (long s = -m; s <= m; ++s) {
      const long i0 = std::max(b0, -s);
      const long i1 = std::min(b1, nn - s);
      if (i1 <= i0) continue;
      K.add(s_row + (i0 + s - org), d_row + (i0 - b0), static_cast<std::size_t>(i1 - i0));
    }
    for (long i = b0; i < b1; ++i) {
      d_row[i - b0] /= static_cast<double>(window_count(static_cast<std::size_t>(i), n, M));
    }
  }
}

}  // namespace detail

int SmoothingConfig::rule_of_thumb_M(std::size_t R) {
  const double m = std::floor((0.15 * static_cast<double>(R) - 1.0) / 2.0);
  return m < 0.0 ? 0 : static_cast<int>(m);
}

int SmoothingConfig::default_MT(std::size_t T) {
  return static_cast<int>(std::floor(0.05 * static_cast<double>(T)));
}

int SmoothingConfig::resolve_J(std::size_t T) const {
  const int JT = dyadic_log2(T);
  if (JT < 1) throw InputError("series length T=" + std::to_string(T) + " is not a power of two");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  const int J = static_cast<int>(std::floor(alpha * JT + 1e-12));
  if (J < 1) {
    throw ConfigError("alpha=" + std::to_string(alpha) + " leaves no scales for T=" +
                      std::to_string(T));
  }
  return J;
}

void SmoothingConfig::validate(std::size_t R, std::size_t T) const {
  check_window(M, R, "M", "R");
  check_window(MT, T, "MT", "T");
  (void)resolve_J(T);
}

PeriodogramField smooth_over_replicates(const PeriodogramField& raw, int M) {
  require_raw(raw);
  check_window(M, raw.R, "M", "R");
  PeriodogramField out(raw.J, raw.T, raw.R);
  detail::window_mean(raw.values.data(), out.values.data(),
                      static_cast<std::size_t>(raw.J) * raw.T, raw.R, 1, M);
  out.kind = PeriodogramKind::ReplicateSmoothed;
  out.M = M;
  out.MT = 0;
  return out;
}

PeriodogramField smooth_over_time_and_replicates(const PeriodogramField& raw, int M, int MT) {
  require_raw(raw);
  check_window(MT, raw.T, "MT", "T");
  PeriodogramField rep = smooth_over_replicates(raw, M);
  if (MT == 0) return rep;
  PeriodogramField out(raw.J, raw.T, raw.R);
  detail::window_mean(rep.values.data(), out.values.data(), static_cast<std::size_t>(raw.J),
                      raw.T, raw.R, MT);
  out.kind = PeriodogramKind::TimeReplicateSmoothed;
  out.M = M;
  out.MT = MT;
  return out;
}

SpectralEstimate correct_spectrum(const PeriodogramField& smoothed, const InnerProductMatrix& ipm,
                                  const SmoothingConfig& config) {
  if (smoothed.J != ipm.J) {
    throw ConfigError("periodogram has " + std::to_string(smoothed.J) +
                      " scales but the inner product matrix was built for J=" +
                      std::to_string(ipm.J));
  }
  SpectralEstimate est(smoothed.J, smoothed.T, smoothed.R);
  est.config = config;
  est.config.M = smoothed.M;
  est.config.MT = smoothed.MT;
  const std::size_t J = static_cast<std::size_t>(smoothed.J);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = ipm.A_inv;
  kernels::active().mix_rows(w.data(), J, smoothed.values.data(), est.values.data(),
                             smoothed.T * smoothed.R);
  if (config.truncate_negative) {
    std::size_t clamped = 0;
    for (double& v : est.values) {
      if (v < 0.0) {
        v = 0.0;
        ++clamped;
      }
    }
    est.clamp_fraction =
        est.values.empty() ? 0.0 : static_cast<double>(clamped) / static_cast<double>(est.values.size());
  }
  const std::size_t M = static_cast<std::size_t>(std::max(0, smoothed.M));
  est.valid_begin = std::min(M, smoothed.R);
  est.valid_end = smoothed.R > M ? smoothed.R - M : est.valid_begin;
  return est;
}

SpectralEstimate estimate_rews(const CoefficientField& coeffs, const Basis& basis,
                               const SmoothingConfig& config) {
  config.validate(coeffs.R, coeffs.T);
  const int J = config.resolve_J(coeffs.T);
  if (basis.J() != J || coeffs.J != J) {
    throw ConfigError("basis has " + std::to_string(basis.J()) + " scales, coefficients " +
                      std::to_string(coeffs.J) + ", configuration needs J=" + std::to_string(J));
  }
  const PeriodogramField raw = raw_periodogram(coeffs);
  const PeriodogramField smoothed = config.MT > 0
                                        ? smooth_over_time_and_replicates(raw, config.M, config.MT)
                                        : smooth_over_replicates(raw, config.M);
  return correct_spectrum(smoothed, basis.ipm, config);
}

SpectralEstimate estimate_rews(const ReplicateEnsemble& ensemble, const Basis& basis,
                               const SmoothingConfig& config) {
  ensemble.validate(true);
  config.validate(ensemble.replicates, ensemble.length);
  const int J = config.resolve_J(ensemble.length);
  if (basis.J() != J) {
    throw ConfigError("basis has " + std::to_string(basis.J()) +
                      " scales but the configuration needs J=" + std::to_string(J));
  }
  return estimate_rews(transform_ensemble(ensemble, basis.wavelets), basis, config);
}

SpectralEstimate estimate_lsw_average(const CoefficientField& coeffs, const Basis& basis,
                                      const SmoothingConfig& config) {
  const int J = config.resolve_J(coeffs.T);
  if (basis.J() != J || coeffs.J != J) {
    throw ConfigError("basis, coefficients and configuration disagree on J");
  }
  const PeriodogramField raw = raw_periodogram(coeffs);
  const PeriodogramField smoothed = smooth_over_time_and_replicates(raw, 0, config.MT);
  SmoothingConfig per_replicate = config;
  per_replicate.M = 0;
  SpectralEstimate each = correct_spectrum(smoothed, basis.ipm, per_replicate);

  SpectralEstimate est(J, coeffs.T, coeffs.R);
  est.config = per_replicate;
  est.clamp_fraction = each.clamp_fraction;
  est.valid_begin = 0;
  est.valid_end = coeffs.R;
  const std::size_t R = coeffs.R;
  for (std::size_t row = 0; row < static_cast<std::size_t>(J) * coeffs.T; ++row) {
    const double* src = each.values.data() + row * R;
    double s = 0.0;
    for (std::size_t r = 0; r < R; ++r) s += src[r];
    const double mean = s / static_cast<double>(R);
    std::fill(est.values.begin() + static_cast<long>(row * R),
              est.values.begin() + static_cast<long>((row + 1) * R), mean);
  }
  return est;
}

namespace {

std::size_t nearest_index(double u, std::size_t n) {
  const double i = std::round(u * static_cast<double>(n));
  if (i <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(i), n - 1);
}

LagSequence combine(const std::vector<double>& weights, const AutocorrelationSet& acs,
                    long max_lag) {
  LagSequence out;
  out.min_lag = -max_lag;
  out.values.assign(static_cast<std::size_t>(2 * max_lag + 1), 0.0);
  for (std::size_t j = 0; j < weights.size() && j < acs.Psi.size(); ++j) {
    if (weights[j] == 0.0) continue;
    for (long tau = -max_lag; tau <= max_lag; ++tau) {
      out.values[static_cast<std::size_t>(tau + max_lag)] += weights[j] * acs.Psi[j](tau);
    }
  }
  return out;
}

}  // namespace

LagSequence rlacv(const SpectralEstimate& spec, const AutocorrelationSet& acs, double z,
                  double nu, long max_lag) {
  const std::size_t k = nearest_index(z, spec.T);
  const std::size_t r = nearest_index(nu, spec.R);
  std::vector<double> w(static_cast<std::size_t>(spec.J));
  for (int j = 1; j <= spec.J; ++j) w[static_cast<std::size_t>(j - 1)] = spec(j, k, r);
  return combine(w, acs, max_lag);
}

LagSequence rlacv(const SpectrumSpec& spec, const AutocorrelationSet& acs, int JT, double z,
                  double nu, long max_lag) {
  std::vector<double> w(acs.Psi.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = spec(static_cast<int>(j + 1), z, nu, JT);
  return combine(w, acs, max_lag);
}

}  // namespace rlsw
