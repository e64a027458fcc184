#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rlsw/wavelet.hpp"

namespace rlsw {

/// R x T replicated series, replicate-major: data[r * T + t].
struct ReplicateEnsemble {
  std::size_t replicates = 0;
  std::size_t length = 0;
  std::vector<double> data;
  std::string source;
  bool standardized = false;
  /// Replicates present before mirroring; equals `replicates` otherwise.
  std::size_t original_replicates = 0;

  static ReplicateEnsemble zeros(std::size_t R, std::size_t T);

  const double* row(std::size_t r) const { return data.data() + r * length; }
  double* row(std::size_t r) { return data.data() + r * length; }
  double at(std::size_t r, std::size_t t) const { return data[r * length + t]; }

  /// Checks shape and finiteness; with `estimation` also requires dyadic T.
  void validate(bool estimation) const;
};

/// Scale x time x replicate array with replicate fastest:
/// values[((j - 1) * T + k) * R + r], j = 1..J.
struct ScaleField {
  int J = 0;
  std::size_t T = 0;
  std::size_t R = 0;
  std::vector<double> values;

  ScaleField() = default;
  ScaleField(int J_, std::size_t T_, std::size_t R_)
      : J(J_), T(T_), R(R_), values(static_cast<std::size_t>(J_) * T_ * R_, 0.0) {}

  std::size_t index(int j, std::size_t k, std::size_t r) const {
    return (static_cast<std::size_t>(j - 1) * T + k) * R + r;
  }
  double operator()(int j, std::size_t k, std::size_t r) const { return values[index(j, k, r)]; }
  double& operator()(int j, std::size_t k, std::size_t r) { return values[index(j, k, r)]; }
  double* scale(int j) { return values.data() + static_cast<std::size_t>(j - 1) * T * R; }
  const double* scale(int j) const { return values.data() + static_cast<std::size_t>(j - 1) * T * R; }
  bool same_shape(const ScaleField& o) const { return J == o.J && T == o.T && R == o.R; }
};

struct CoefficientField : ScaleField {
  using ScaleField::ScaleField;
  std::string basis_label;
};

enum class PeriodogramKind { Raw, ReplicateSmoothed, TimeReplicateSmoothed, Corrected };

const char* to_string(PeriodogramKind kind);

struct PeriodogramField : ScaleField {
  using ScaleField::ScaleField;
  PeriodogramKind kind = PeriodogramKind::Raw;
  int M = 0;
  int MT = 0;
};

/// Periodic non-decimated transform of one series of length T (dyadic).
/// Returns J x T coefficients, row j - 1 holding d_{j,k}.
std::vector<double> ndwt(const double* x, std::size_t T, const DiscreteWaveletSet& ws);
std::vector<double> ndwt(const std::vector<double>& x, const DiscreteWaveletSet& ws);

/// Adjoint of ndwt: x_t = sum_j sum_k c_{j,k} psi_{j,k}(t).
std::vector<double> ndwt_adjoint(const std::vector<double>& coeffs, std::size_t T,
                                 const DiscreteWaveletSet& ws);

/// ndwt of every replicate (replicate-parallel, deterministic).
CoefficientField transform_ensemble(const ReplicateEnsemble& e, const DiscreteWaveletSet& ws);

PeriodogramField raw_periodogram(const CoefficientField& coeffs);

/// J x T array (row-major by scale) of d^r * d^{r'}.
std::vector<double> cross_periodogram(const CoefficientField& coeffs, std::size_t r,
                                      std::size_t r_prime);

}  // namespace rlsw
