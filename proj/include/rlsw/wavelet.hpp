#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rlsw {

enum class FamilyId { Haar, DaubechiesExtremalPhase, DaubechiesLeastAsymmetric };

/// Orthonormal compactly supported wavelet filter pair.
class WaveletFamily {
 public:
  /// Throws ConfigError for an unsupported vanishing-moment count
  /// (Haar: 1; extremal phase: 1..10; least asymmetric: 2..10).
  WaveletFamily(FamilyId id, int vanishing_moments);

  /// Accepts "haar", "daubechies_extremal_phase" / "ep" / "dbN",
  /// "daubechies_least_asymmetric" / "la" / "symN".
  static WaveletFamily parse(std::string_view name, int vanishing_moments);

  FamilyId id() const { return id_; }
  int vanishing_moments() const { return vm_; }
  const std::vector<double>& low_pass() const { return h_; }
  const std::vector<double>& high_pass() const { return g_; }
  std::size_t length() const { return h_.size(); }

  /// Canonical name, e.g. "haar", "daubechies_least_asymmetric".
  std::string name() const;
  /// Short label used in file names and sidecars, e.g. "LA6".
  std::string label() const;

 private:
  FamilyId id_;
  int vm_;
  std::vector<double> h_;
  std::vector<double> g_;
};

/// Non-decimated discrete wavelets psi_j for j = 1..J, stored as finite
/// filters: psi_{j,k}(t) = psi_j[k - t].
class DiscreteWaveletSet {
 public:
  DiscreteWaveletSet(const WaveletFamily& family, int J);

  const WaveletFamily& family() const { return family_; }
  int max_scale() const { return static_cast<int>(psi_.size()); }
  /// 1-based scale index.
  const std::vector<double>& psi(int j) const;

 private:
  WaveletFamily family_;
  std::vector<std::vector<double>> psi_;
};

DiscreteWaveletSet build_discrete_wavelets(const WaveletFamily& family, int J);

/// Finite sequence over integer lags min_lag .. min_lag + size - 1.
struct LagSequence {
  long min_lag = 0;
  std::vector<double> values;

  long max_lag() const { return min_lag + static_cast<long>(values.size()) - 1; }
  /// Zero outside the stored support.
  double operator()(long tau) const;
};

/// Psi_j(tau) = sum_k psi_j[k] psi_j[k - tau]. Built by cascading filter
/// autocorrelations and stored exactly symmetric.
LagSequence autocorrelation_wavelet(const DiscreteWaveletSet& ws, int j);

/// Psi_{j,l}(tau) = sum_k psi_j[k] psi_l[k - tau], by direct correlation.
LagSequence cross_correlation_wavelet(const DiscreteWaveletSet& ws, int j,
                                      int l);

struct AutocorrelationSet {
  std::vector<LagSequence> Psi;  // index j - 1
  const LagSequence& operator[](int j) const { return Psi.at(j - 1); }
};

AutocorrelationSet autocorrelation_set(const DiscreteWaveletSet& ws);

struct InnerProductMatrix {
  int J = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd A_inv;
  double condition_estimate = 0.0;  // 1-norm condition number
};

/// A_{j,l} = sum_tau Psi_j(tau) Psi_l(tau). Throws LinAlgError when the
/// condition estimate exceeds 1e12.
InnerProductMatrix inner_product_matrix(const DiscreteWaveletSet& ws);
InnerProductMatrix inner_product_matrix(const AutocorrelationSet& acs,
                                        const std::string& family_label);

/// Everything the estimators need for one (family, J).
struct Basis {
  DiscreteWaveletSet wavelets;
  AutocorrelationSet autocorrelations;
  InnerProductMatrix ipm;

  int J() const { return wavelets.max_scale(); }
};

Basis make_basis(const WaveletFamily& family, int J);

/// log2(n) for a power of two, -1 otherwise.
int dyadic_log2(std::size_t n);

}  // namespace rlsw
