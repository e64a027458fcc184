#pragma once

#include <cstddef>
#include <utility>

#include "rlsw/model.hpp"
#include "rlsw/transform.hpp"
#include "rlsw/wavelet.hpp"

namespace rlsw {

struct SmoothingConfig {
  int M = 0;        // replicate half-window
  int MT = 0;       // time half-window, 0 disables time smoothing
  double alpha = 1.0;
  bool truncate_negative = false;

  /// floor((0.15 R - 1) / 2), at least 0.
  static int rule_of_thumb_M(std::size_t R);
  /// floor(0.05 T).
  static int default_MT(std::size_t T);

  /// floor(alpha * log2(T)); throws ConfigError when below 1.
  int resolve_J(std::size_t T) const;
  /// Throws ConfigError when the windows do not fit R x T.
  void validate(std::size_t R, std::size_t T) const;
};

struct SpectralEstimate : ScaleField {
  using ScaleField::ScaleField;
  SmoothingConfig config;
  std::size_t valid_begin = 0;  // replicates [valid_begin, valid_end) had full windows
  std::size_t valid_end = 0;
  double clamp_fraction = 0.0;  // share of values clamped to zero
};

/// Mean over replicates r-M..r+M, window truncated to [0, R) and renormalized.
PeriodogramField smooth_over_replicates(const PeriodogramField& raw, int M);

/// Mean over the (2M+1) x (2MT+1) replicate-time rectangle, truncated and
/// renormalized at both boundaries.
PeriodogramField smooth_over_time_and_replicates(const PeriodogramField& raw, int M, int MT);

/// S_j = sum_l A^{-1}_{j,l} I_l, optionally clamped at zero.
SpectralEstimate correct_spectrum(const PeriodogramField& smoothed, const InnerProductMatrix& ipm,
                                  const SmoothingConfig& config);

/// ndwt -> raw periodogram -> smoothing -> correction. basis.J() must equal
/// config.resolve_J(T).
SpectralEstimate estimate_rews(const ReplicateEnsemble& ensemble, const Basis& basis,
                               const SmoothingConfig& config);

/// Same pipeline starting from coefficients already computed with `basis`.
SpectralEstimate estimate_rews(const CoefficientField& coeffs, const Basis& basis,
                               const SmoothingConfig& config);

/// Classical baseline: each replicate smoothed over time only (config.MT),
/// corrected, then averaged over all replicates and broadcast.
SpectralEstimate estimate_lsw_average(const CoefficientField& coeffs, const Basis& basis,
                                      const SmoothingConfig& config);

/// c(z, nu; tau) = sum_j S_j(z, nu) Psi_j(tau) for |tau| <= max_lag.
/// The estimate is read at the nearest grid point.
LagSequence rlacv(const SpectralEstimate& spec, const AutocorrelationSet& acs, double z,
                  double nu, long max_lag);
LagSequence rlacv(const SpectrumSpec& spec, const AutocorrelationSet& acs, int JT, double z,
                  double nu, long max_lag);

}  // namespace rlsw
