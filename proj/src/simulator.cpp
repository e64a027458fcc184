#include "rlsw/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rlsw/error.hpp"
#include "rlsw/parallel.hpp"
#include "rlsw/random.hpp"

namespace rlsw {

ScaleField SpectrumSpec::grid(int J, std::size_t T, std::size_t R) const {
  const int JT = dyadic_log2(T);
  ScaleField out(J, T, R);
  for (int j = 1; j <= J; ++j) {
    for (std::size_t k = 0; k < T; ++k) {
      const double z = static_cast<double>(k) / static_cast<double>(T);
      for (std::size_t r = 0; r < R; ++r) {
        out(j, k, r) = eval(j, z, static_cast<double>(r) / static_cast<double>(R), JT);
      }
    }
  }
  return out;
}

const CoherenceBlock* CoherenceSpec::find(int j, std::size_t k) const {
  for (const auto& b : blocks) {
    if (b.scale == j && k >= b.k_begin && k < b.k_end) return &b;
  }
  return nullptr;
}

double CoherenceSpec::operator()(int j, std::size_t k, std::size_t r, std::size_t r_prime) const {
  if (r == r_prime) return 1.0;
  const CoherenceBlock* b = find(j, k);
  if (b == nullptr) return 0.0;
  return b->matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r_prime));
}

SpectrumSpec builtin_spectrum(std::string_view name, double sigma2) {
  constexpr double pi = std::numbers::pi;
  SpectrumSpec s;
  s.name = std::string(name);
  if (name == "sim_main") {
    s.eval = [](int j, double z, double nu, int) {
      if (j == 3 && z >= 65.0 / 256.0 && z < 1.0) {
        const double c = std::cos(pi * z);
        return 4.0 * (1.0 - nu) * c * c;
      }
      if (j == 2 && z >= 0.0 && z < 0.5) {
        const double c = std::cos(2.0 * pi * z + 5.0 * nu);
        return 4.0 * c * c;
      }
      return 0.0;
    };
    s.default_family = FamilyId::DaubechiesLeastAsymmetric;
    s.default_vanishing_moments = 6;
  } else if (name == "sim1") {
    s.eval = [](int j, double z, double nu, int) {
      if (j != 4) return 0.0;
      const double v = std::sin(2.0 * pi * z * (1.0 + 2.0 * nu));
      return 4.0 * nu * v * v;
    };
    s.default_family = FamilyId::DaubechiesLeastAsymmetric;
    s.default_vanishing_moments = 10;
  } else if (name == "sim2") {
    s.eval = [](int j, double z, double nu, int) {
      if (j != 1) return 0.0;
      const double v = std::sin(2.0 * pi * z + 10.0 * nu);
      return v * v;
    };
    s.default_family = FamilyId::DaubechiesLeastAsymmetric;
    s.default_vanishing_moments = 10;
  } else if (name == "white_noise") {
    if (!(sigma2 >= 0.0)) throw ConfigError("white_noise variance must be non-negative");
    s.eval = [sigma2](int j, double, double, int) { return sigma2 * std::ldexp(1.0, -j); };
    s.default_family = FamilyId::Haar;
    s.default_vanishing_moments = 1;
  } else if (name == "zero") {
    s.eval = [](int, double, double, int) { return 0.0; };
    s.default_family = FamilyId::Haar;
    s.default_vanishing_moments = 1;
  } else {
    throw ConfigError("unknown spectrum '" + std::string(name) +
                      "' (expected sim_main, sim1, sim2, white_noise or zero)");
  }
  return s;
}

std::vector<std::string> builtin_spectrum_names() {
  return {"sim_main", "sim1", "sim2", "white_noise", "zero"};
}

CoherenceSpec builtin_coherence(std::string_view name, std::size_t R, std::size_t T) {
  CoherenceSpec c;
  c.name = std::string(name);
  c.R = R;
  c.T = T;
  if (name == "none") return c;
  const auto n = static_cast<Eigen::Index>(R);
  CoherenceBlock b;
  b.scale = kCoherenceScale;
  b.k_begin = 0;
  b.k_end = T / 2;
  if (name == "constant07") {
    b.matrix = Eigen::MatrixXd::Constant(n, n, 0.7);
  } else if (name == "block_9971_50") {
    const Eigen::Index h = n / 2;
    b.matrix.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index q = 0; q < n; ++q) {
        const bool first_r = r < h;
        const bool first_q = q < h;
        b.matrix(r, q) = first_r && first_q ? 0.99 : (!first_r && !first_q ? 0.5 : -0.71);
      }
    }
  } else {
    throw ConfigError("unknown coherence design '" + std::string(name) +
                      "' (expected none, constant07 or block_9971_50)");
  }
  b.matrix.diagonal().setOnes();
  c.blocks.push_back(std::move(b));
  return c;
}

std::vector<std::string> builtin_coherence_names() {
  return {"none", "constant07", "block_9971_50"};
}

namespace {

// Cholesky that tolerates positive semi-definite input: a non-positive pivot
// zeroes its column.
Eigen::MatrixXd semidefinite_cholesky(const Eigen::MatrixXd& P) {
  const Eigen::Index n = P.rows();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  const double tol = 1e-13 * std::max(1.0, P.diagonal().cwiseAbs().maxCoeff());
  for (Eigen::Index c = 0; c < n; ++c) {
    double d = P(c, c) - L.row(c).head(c).squaredNorm();
    if (d <= tol) continue;
    const double piv = std::sqrt(d);
    L(c, c) = piv;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      L(r, c) = (P(r, c) - L.row(r).head(c).dot(L.row(c).head(c))) / piv;
    }
  }
  return L;
}

}  // namespace

InnovationFactor factorize_correlation(const Eigen::MatrixXd& P) {
  if (P.rows() != P.cols() || P.rows() == 0) {
    throw ConfigError("correlation matrix must be square and non-empty");
  }
  const Eigen::Index n = P.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(P(i, i) - 1.0) > 1e-12) {
      throw ConfigError("correlation matrix diagonal entry " + std::to_string(i) + " is " +
                        std::to_string(P(i, i)) + ", expected 1");
    }
    for (Eigen::Index k = 0; k < i; ++k) {
      if (std::abs(P(i, k) - P(k, i)) > 1e-12) {
        throw ConfigError("correlation matrix is not symmetric at (" + std::to_string(i) + ", " +
                          std::to_string(k) + ")");
      }
    }
  }

  InnovationFactor f;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  f.min_eigenvalue = lambda.minCoeff();
  const double tol = 1e-12 * static_cast<double>(n);

  Eigen::MatrixXd target = P;
  if (f.min_eigenvalue < -tol) {
    Eigen::VectorXd clipped = lambda;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (clipped(i) < 0.0) {
        clipped(i) = 0.0;
        ++f.clipped_eigenvalues;
      }
    }
    const Eigen::MatrixXd& V = eig.eigenvectors();
    Eigen::MatrixXd repaired = V * clipped.asDiagonal() * V.transpose();
    const Eigen::VectorXd s = repaired.diagonal().cwiseSqrt().cwiseInverse();
    repaired = s.asDiagonal() * repaired * s.asDiagonal();
    repaired = 0.5 * (repaired + repaired.transpose());
    repaired.diagonal().setOnes();
    f.clipped = true;
    f.max_adjustment = (repaired - P).cwiseAbs().maxCoeff();
    target = repaired;
  }

  f.L = semidefinite_cholesky(target);
  f.reconstruction_error = (f.L * f.L.transpose() - target).cwiseAbs().maxCoeff();
  if (f.reconstruction_error > 1e-8) {
    // Rank-deficient input can defeat the triangular factor; a square-root
    // factor from the eigendecomposition always exists.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e2(target);
    const Eigen::VectorXd root = e2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    f.L = e2.eigenvectors() * root.asDiagonal();
    f.reconstruction_error = (f.L * f.L.transpose() - target).cwiseAbs().maxCoeff();
  }
  return f;
}

InnovationModel InnovationModel::build(const CoherenceSpec& coh) {
  InnovationModel m;
  m.factors.reserve(coh.blocks.size());
  for (const auto& b : coh.blocks) m.factors.push_back(factorize_correlation(b.matrix));
  return m;
}

ReplicateEnsemble simulate_ensemble(const SpectrumSpec& spec, const CoherenceSpec& coh,
                                    const InnovationModel& model, const DiscreteWaveletSet& ws,
                                    std::size_t R, std::size_t T, std::uint64_t seed) {
  const int JT = dyadic_log2(T);
  if (JT < 1) throw InputError("simulation length T=" + std::to_string(T) + " is not a power of two");
  if (R < 1) throw InputError("simulation needs at least one replicate");
  if (ws.max_scale() != JT) {
    throw ConfigError("simulation needs a wavelet set with log2(T)=" + std::to_string(JT) +
                      " scales");
  }
  if (!coh.blocks.empty() && (coh.R != R || coh.T != T)) {
    throw ConfigError("coherence design was built for R=" + std::to_string(coh.R) +
                      ", T=" + std::to_string(coh.T));
  }
  if (model.factors.size() != coh.blocks.size()) {
    throw ConfigError("innovation model does not match the coherence design");
  }
  for (const auto& b : coh.blocks) {
    if (b.scale < 1 || b.scale > JT || b.k_end > T ||
        static_cast<std::size_t>(b.matrix.rows()) != R) {
      throw ConfigError("coherence block does not fit the simulation grid");
    }
  }

  // Amplitudes on the grid; scales with no energy skip innovation draws.
  const ScaleField S = spec.grid(JT, T, R);
  for (double v : S.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("spectrum '" + spec.name + "' is negative or non-finite on the grid");
    }
  }
  ScaleField coeffs(JT, T, R);
  for (int j = 1; j <= JT; ++j) {
    const double* s = S.scale(j);
    if (std::all_of(s, s + T * R, [](double v) { return v == 0.0; })) continue;
    double* c = coeffs.scale(j);
    parallel_for(T, [&](std::size_t k) {
      double* row = c + k * R;
      for (std::size_t r = 0; r < R; ++r) {
        row[r] = standard_normal(seed, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(r),
                                 static_cast<std::uint32_t>(j), 0u);
      }
      for (std::size_t b = 0; b < coh.blocks.size(); ++b) {
        const auto& blk = coh.blocks[b];
        if (blk.scale != j || k < blk.k_begin || k >= blk.k_end) continue;
        const Eigen::Map<Eigen::VectorXd> eta(row, static_cast<Eigen::Index>(R));
        const Eigen::VectorXd xi = model.factors[b].L * eta;
        for (std::size_t r = 0; r < R; ++r) row[r] = xi(static_cast<Eigen::Index>(r));
        break;
      }
      const double* srow = s + k * R;
      for (std::size_t r = 0; r < R; ++r) row[r] *= std::sqrt(srow[r]);
    });
  }

  ReplicateEnsemble e = ReplicateEnsemble::zeros(R, T);
  e.source = "simulate:" + spec.name + "/" + coh.name + "/" + ws.family().label() +
             "/seed=" + std::to_string(seed);
  parallel_for(R, [&](std::size_t r) {
    std::vector<double> a(static_cast<std::size_t>(JT) * T);
    for (int j = 1; j <= JT; ++j) {
      for (std::size_t k = 0; k < T; ++k) {
        a[static_cast<std::size_t>(j - 1) * T + k] = coeffs(j, k, r);
      }
    }
    const std::vector<double> x = ndwt_adjoint(a, T, ws);
    std::copy(x.begin(), x.end(), e.row(r));
  });
  return e;
}

ReplicateEnsemble simulate_ensemble(const SpectrumSpec& spec, const CoherenceSpec& coh,
                                    const WaveletFamily& family, std::size_t R, std::size_t T,
                                    std::uint64_t seed) {
  const int JT = dyadic_log2(T);
  if (JT < 1) throw InputError("simulation length T=" + std::to_string(T) + " is not a power of two");
  const DiscreteWaveletSet ws(family, JT);
  return simulate_ensemble(spec, coh, InnovationModel::build(coh), ws, R, T, seed);
}

}  // namespace rlsw
