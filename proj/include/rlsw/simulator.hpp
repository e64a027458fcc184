#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rlsw/model.hpp"
#include "rlsw/transform.hpp"
#include "rlsw/wavelet.hpp"

namespace rlsw {

/// sim_main, sim1, sim2, white_noise (sigma2 used only by white_noise).
SpectrumSpec builtin_spectrum(std::string_view name, double sigma2 = 1.0);
std::vector<std::string> builtin_spectrum_names();

/// none, constant07, block_9971_50. Coherent blocks sit on the scale that
/// carries the sim1 content (scale 4) over the first T/2 locations.
CoherenceSpec builtin_coherence(std::string_view name, std::size_t R, std::size_t T);
std::vector<std::string> builtin_coherence_names();

/// Scale that holds the coherent blocks of the builtin designs.
constexpr int kCoherenceScale = 4;

struct InnovationFactor {
  Eigen::MatrixXd L;               // L * L^T reproduces the (repaired) matrix
  bool clipped = false;            // negative eigenvalues were floored
  int clipped_eigenvalues = 0;
  double min_eigenvalue = 0.0;     // of the input matrix
  double max_adjustment = 0.0;     // max |P_repaired - P|
  double reconstruction_error = 0.0;  // max |L L^T - P_repaired|
};

/// Lower-triangular factor of a correlation matrix. Non-PSD input is
/// repaired by flooring eigenvalues at zero and rescaling to unit diagonal.
/// Throws ConfigError for non-symmetric or non-unit-diagonal input.
InnovationFactor factorize_correlation(const Eigen::MatrixXd& P);

/// Factors for every coherent block of a CoherenceSpec, in block order.
struct InnovationModel {
  std::vector<InnovationFactor> factors;

  static InnovationModel build(const CoherenceSpec& coh);
};

/// X_t^r = sum_j sum_k sqrt(S_j(k/T, r/R)) psi_{j,k}(t) xi_{j,k}^r over
/// j = 1..log2(T) with periodic translates. xi are standard Gaussian from
/// Philox counters (k, r, j, 0) under `seed`, mixed across replicates by
/// the coherence factors.
ReplicateEnsemble simulate_ensemble(const SpectrumSpec& spec, const CoherenceSpec& coh,
                                    const WaveletFamily& family, std::size_t R, std::size_t T,
                                    std::uint64_t seed);

/// Variant reusing a prebuilt wavelet set (must have log2(T) scales) and
/// innovation model.
ReplicateEnsemble simulate_ensemble(const SpectrumSpec& spec, const CoherenceSpec& coh,
                                    const InnovationModel& model, const DiscreteWaveletSet& ws,
                                    std::size_t R, std::size_t T, std::uint64_t seed);

}  // namespace rlsw
