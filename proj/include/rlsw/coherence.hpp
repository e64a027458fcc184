#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rlsw/transform.hpp"
#include "rlsw/wavelet.hpp"

namespace rlsw {

enum class CoherenceOrder { CorrectThenSmooth, SmoothThenCorrect };

const char* to_string(CoherenceOrder order);
CoherenceOrder parse_coherence_order(std::string_view s);

struct CoherencePipelineConfig {
  int M = 0;
  int MT = 0;
  double alpha = 1.0;
  CoherenceOrder order = CoherenceOrder::CorrectThenSmooth;
  /// Clamp corrected autospectra at zero. Correct-then-smooth clamps the raw
  /// corrected autos before smoothing; smooth-then-correct clamps the result.
  bool truncate_negative = true;
  /// Replace negative entries of A^-1 by zero before any correction. Every
  /// corrected quantity is then a nonnegative mix of periodograms.
  bool nonnegative_correction = true;
  bool clamp_to_unit = true;
  /// Denominators at or below floor_epsilon * (max smoothed autospectrum)
  /// yield a missing value (quiet NaN).
  double floor_epsilon = 1e-12;

  /// Defaults for an order: correct-then-smooth truncates the matrix and the
  /// values and clamps, smooth-then-correct does none of these.
  static CoherencePipelineConfig defaults(CoherenceOrder order);
  void validate(std::size_t R, std::size_t T) const;
};

/// Counters gathered while forming coherences.
struct CoherenceStats {
  std::size_t defined = 0;
  std::size_t missing = 0;
  std::size_t clamped = 0;
  double max_abs = 0.0;  // largest |rho| before clamping

  void merge(const CoherenceStats& o);
  double clamp_fraction() const {
    return defined == 0 ? 0.0 : static_cast<double>(clamped) / static_cast<double>(defined);
  }
};

/// Streams replicate coherences diagonal by diagonal (r' = r + delta)
/// without materializing the R x R tensor. Immutable after construction;
/// concurrent calls are safe.
class CoherenceEngine {
 public:
  CoherenceEngine(const CoefficientField& coeffs, const InnerProductMatrix& ipm,
                  const CoherencePipelineConfig& cfg);

  int J() const { return J_; }
  std::size_t T() const { return T_; }
  std::size_t R() const { return R_; }
  double floor() const { return floor_; }
  const CoherencePipelineConfig& config() const { return cfg_; }

  /// Coherence for the pairs (i, i + delta), i in [i_begin, i_end). Output
  /// layout [j - 1][k][i - i_begin]; missing values are quiet NaN.
  void diagonal(std::size_t delta, std::size_t i_begin, std::size_t i_end,
                std::vector<double>& rho, CoherenceStats* stats = nullptr) const;

  /// Smoothed corrected cross-spectrum (never clamped) and the two matching
  /// autospectra for the same pairs, same layout as diagonal().
  void spectra(std::size_t delta, std::size_t i_begin, std::size_t i_end,
               std::vector<double>* cross, std::vector<double>* auto_a,
               std::vector<double>* auto_b) const;

  /// Smoothed autospectrum with full (untruncated-by-partner) windows,
  /// layout [j - 1][k][r].
  const std::vector<double>& autospectrum() const { return auto0_; }

 private:
  CoherencePipelineConfig cfg_;
  int J_;
  std::size_t T_;
  std::size_t R_;
  const CoefficientField* coeffs_;
  std::vector<double> w_;       // A^{-1}, row-major
  std::vector<double> base_;    // CTS: clamped corrected autos; STC: raw squares. Time-smoothed.
  std::vector<double> auto0_;
  double floor_ = 0.0;
};

struct CrossSpectrumResult {
  std::vector<double> values;  // J x T, row-major by scale
  bool edge_truncated = false;  // shifted-pair window lost terms at the replicate edges
  std::size_t window_terms = 0;
};

CrossSpectrumResult estimate_cross_spectrum(const CoefficientField& coeffs, std::size_t r,
                                            std::size_t r_prime, const InnerProductMatrix& ipm,
                                            const CoherencePipelineConfig& cfg);

struct CoherenceSlice {
  int j = 0;
  std::size_t r = 0;
  std::size_t T = 0;
  std::size_t R = 0;
  std::vector<double> values;  // [k * R + r']
  double clamp_fraction = 0.0;
  std::size_t missing = 0;
  CoherencePipelineConfig config;

  double operator()(std::size_t k, std::size_t r_prime) const { return values[k * R + r_prime]; }
};

CoherenceSlice estimate_coherence_slice(const ReplicateEnsemble& ensemble, const Basis& basis,
                                        int j, std::size_t r, const CoherencePipelineConfig& cfg);
CoherenceSlice estimate_coherence_slice(const CoherenceEngine& engine, int j, std::size_t r);

std::vector<double> coherence_pair_series(const ReplicateEnsemble& ensemble, const Basis& basis,
                                          int j, std::size_t r, std::size_t r_prime,
                                          const CoherencePipelineConfig& cfg);
std::vector<double> coherence_pair_series(const CoherenceEngine& engine, int j, std::size_t r,
                                          std::size_t r_prime);

}  // namespace rlsw
