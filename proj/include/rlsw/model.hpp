#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rlsw/transform.hpp"
#include "rlsw/wavelet.hpp"

namespace rlsw {

/// Ground-truth spectrum S_j(z, nu) >= 0. Scales are 1-based with j = 1 the
/// finest; JT = log2(T) is passed so level-relative designs can be expressed.
struct SpectrumSpec {
  std::string name;
  std::function<double(int j, double z, double nu, int JT)> eval;
  /// Wavelet family the design is usually simulated and estimated with.
  FamilyId default_family = FamilyId::DaubechiesLeastAsymmetric;
  int default_vanishing_moments = 6;

  double operator()(int j, double z, double nu, int JT) const { return eval(j, z, nu, JT); }

  /// S_j(k/T, r/R) for j = 1..J.
  ScaleField grid(int J, std::size_t T, std::size_t R) const;
};

/// Piecewise-constant replicate coherence. Outside every block the
/// coherence matrix is the identity.
struct CoherenceBlock {
  int scale = 0;
  std::size_t k_begin = 0;  // half-open [k_begin, k_end)
  std::size_t k_end = 0;
  Eigen::MatrixXd matrix;   // R x R, symmetric, unit diagonal
};

struct CoherenceSpec {
  std::string name = "none";
  std::size_t R = 0;
  std::size_t T = 0;
  std::vector<CoherenceBlock> blocks;

  /// Block covering (j, k), or nullptr.
  const CoherenceBlock* find(int j, std::size_t k) const;
  double operator()(int j, std::size_t k, std::size_t r, std::size_t r_prime) const;
};

}  // namespace rlsw
