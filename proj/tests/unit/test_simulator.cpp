#include <cmath>

#include "doctest.h"
#include "rlsw/error.hpp"
#include "rlsw/random.hpp"
#include "rlsw/simulator.hpp"
#include "rlsw/spectral.hpp"

using namespace rlsw;

TEST_CASE("builtin spectra") {
  const double pi = std::acos(-1.0);
  const auto sim1 = builtin_spectrum("sim1");
  CHECK(std::abs(sim1(8 - 4, 0.25, 0.5, 8)) < 1e-15);
  CHECK(sim1(4, 0.1, 0.5, 8) == doctest::Approx(2.0 * std::pow(std::sin(0.4 * pi), 2)));
  CHECK(sim1(3, 0.1, 0.5, 8) == 0.0);

  const auto main = builtin_spectrum("sim_main");
  CHECK(std::abs(main(3, 0.5, 0.0, 8)) < 1e-15);
  CHECK(main(3, 0.6, 0.25, 8) == doctest::Approx(3.0 * std::pow(std::cos(0.6 * pi), 2)));
  CHECK(main(3, 0.25, 0.25, 8) == 0.0);
  CHECK(main(2, 0.25, 0.1, 8) == doctest::Approx(4.0 * std::pow(std::cos(0.5 * pi + 0.5), 2)));
  CHECK(main(2, 0.75, 0.1, 8) == 0.0);
  CHECK(main(1, 0.75, 0.1, 8) == 0.0);

  const auto sim2 = builtin_spectrum("sim2");
  CHECK(sim2(1, 0.0, 0.0, 8) == 0.0);
  CHECK(sim2(1, 0.1, 0.02, 8) == doctest::Approx(std::pow(std::sin(0.2 * pi + 0.2), 2)));
  CHECK(sim2(2, 0.1, 0.02, 8) == 0.0);

  const auto wn = builtin_spectrum("white_noise", 2.0);
  CHECK(wn(3, 0.4, 0.4, 8) == 0.25);

  CHECK_THROWS_AS(builtin_spectrum("sim9"), ConfigError);
  CHECK(builtin_spectrum_names().size() >= 4);

  const auto grid = main.grid(8, 256, 4);
  CHECK(grid(3, 128, 2) == main(3, 0.5, 0.5, 8));
  for (double v : grid.values) CHECK(v >= 0.0);
}

TEST_CASE("builtin coherence designs") {
  const std::size_t R = 8, T = 16;
  const auto none = builtin_coherence("none", R, T);
  CHECK(none(4, 0, 1, 2) == 0.0);
  CHECK(none(4, 0, 2, 2) == 1.0);

  const auto block = builtin_coherence("block_9971_50", R, T);
  CHECK(block(kCoherenceScale, 0, 1, 2) == 0.99);
  CHECK(block(kCoherenceScale, 3, 1, 6) == -0.71);
  CHECK(block(kCoherenceScale, 3, 6, 1) == -0.71);
  CHECK(block(kCoherenceScale, 7, 5, 6) == 0.5);
  CHECK(block(kCoherenceScale, 8, 1, 2) == 0.0);
  CHECK(block(kCoherenceScale - 1, 0, 1, 2) == 0.0);
  CHECK(block(kCoherenceScale, 2, 3, 3) == 1.0);

  const auto c07 = builtin_coherence("constant07", R, T);
  CHECK(c07(kCoherenceScale, 7, 0, 7) == 0.7);
  CHECK(c07(kCoherenceScale, 8, 0, 7) == 0.0);
  CHECK_THROWS_AS(builtin_coherence("sparse", R, T), ConfigError);
}

TEST_CASE("correlation factorization") {
  SUBCASE("identity") {
    const auto f = factorize_correlation(Eigen::MatrixXd::Identity(5, 5));
    CHECK((f.L - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_FALSE(f.clipped);
  }
  SUBCASE("equicorrelation") {
    Eigen::MatrixXd P = Eigen::MatrixXd::Constant(4, 4, 0.7);
    P.diagonal().setOnes();
    const auto f = factorize_correlation(P);
    CHECK((f.L * f.L.transpose() - P).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_FALSE(f.clipped);
  }
  SUBCASE("block design is repaired") {
    const auto block = builtin_coherence("block_9971_50", 8, 16);
    const Eigen::MatrixXd& P = block.blocks.front().matrix;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    const bool psd = es.eigenvalues().minCoeff() >= 0.0;
    const auto f = factorize_correlation(P);
    CHECK(f.clipped == !psd);
    CHECK(f.min_eigenvalue == doctest::Approx(es.eigenvalues().minCoeff()));
    const Eigen::MatrixXd Q = f.L * f.L.transpose();
    CHECK((Q.diagonal().array() - 1.0).abs().maxCoeff() < 1e-8);
    CHECK(f.reconstruction_error <= 1e-8);
    CHECK(std::abs((Q - P).cwiseAbs().maxCoeff() - f.max_adjustment) < 1e-8);
    // the repaired matrix is PSD with the same sign pattern
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues().minCoeff() > -1e-10);
    CHECK(Q(0, 1) > 0.9);
    CHECK(Q(0, 7) < -0.5);
    CHECK(Q(5, 6) > 0.3);
  }
  SUBCASE("invalid input") {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(3, 3);
    P(0, 1) = 0.2;
    CHECK_THROWS_AS(factorize_correlation(P), ConfigError);
    P(1, 0) = 0.2;
    P(2, 2) = 2.0;
    CHECK_THROWS_AS(factorize_correlation(P), ConfigError);
  }
}

TEST_CASE("zero spectrum gives a zero ensemble") {
  SpectrumSpec zero{"zero", [](int, double, double, int) { return 0.0; }};
  const auto e = simulate_ensemble(zero, builtin_coherence("none", 4, 32),
                                   WaveletFamily(FamilyId::Haar, 1), 4, 32, 1);
  for (double v : e.data) CHECK(v == 0.0);
}

TEST_CASE("simulation is deterministic") {
  const auto spec = builtin_spectrum("sim1");
  const WaveletFamily f(FamilyId::DaubechiesLeastAsymmetric, 10);
  const auto coh = builtin_coherence("block_9971_50", 16, 64);
  const auto a = simulate_ensemble(spec, coh, f, 16, 64, 7);
  const auto b = simulate_ensemble(spec, coh, f, 16, 64, 7);
  const auto c = simulate_ensemble(spec, coh, f, 16, 64, 8);
  CHECK(a.data == b.data);
  CHECK(a.data != c.data);
}

TEST_CASE("white-noise variance matches the model") {
  const std::size_t R = 500, T = 64;
  const auto e = simulate_ensemble(builtin_spectrum("white_noise"), builtin_coherence("none", R, T),
                                   WaveletFamily(FamilyId::Haar, 1), R, T, 3);
  double s = 0;
  for (double v : e.data) s += v * v;
  const double var = s / static_cast<double>(R * T);
  CHECK(var == doctest::Approx(1.0 - std::ldexp(1.0, -6)).epsilon(0.05));
}

TEST_CASE("sim1 lagged autocovariance agrees with the exact model covariance") {
  const std::size_t R = 4, T = 1024, N = 1500;
  const std::size_t r = 3, t = T / 2;
  const auto spec = builtin_spectrum("sim1");
  const WaveletFamily f(FamilyId::DaubechiesLeastAsymmetric, 10);
  const DiscreteWaveletSet ws(f, 10);
  const auto coh = builtin_coherence("none", R, T);
  const auto model = InnovationModel::build(coh);
  std::vector<double> sum(4, 0.0), sum_sq(4, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    const auto e = simulate_ensemble(spec, coh, model, ws, R, T, derive_seed(99, n));
    for (std::size_t tau = 0; tau < 4; ++tau) {
      const double p = e.at(r, t) * e.at(r, t + tau);
      sum[tau] += p;
      sum_sq[tau] += p * p;
    }
  }
  // cov(X_t, X_{t+tau}) = sum_j sum_k S_j(k/T) a_j(k - t) a_j(k - t - tau), with a_j the
  // periodized filter psi_j
  const double nu = static_cast<double>(r) / R;
  std::vector<double> exact(4, 0.0);
  for (int j = 1; j <= 10; ++j) {
    std::vector<double> a(T, 0.0);
    const auto& psi = ws.psi(j);
    for (std::size_t m = 0; m < psi.size(); ++m) a[m % T] += psi[m];
    for (std::size_t k = 0; k < T; ++k) {
      const double s = spec(j, static_cast<double>(k) / T, nu, 10);
      if (s == 0.0) continue;
      for (std::size_t tau = 0; tau < 4; ++tau) {
        exact[tau] += s * a[(k + 2 * T - t) % T] * a[(k + 2 * T - t - tau) % T];
      }
    }
  }
  for (std::size_t tau = 0; tau < 4; ++tau) {
    const double mean = sum[tau] / N;
    const double se = std::sqrt((sum_sq[tau] / N - mean * mean) / N);
    CAPTURE(tau);
    CAPTURE(mean);
    CAPTURE(exact[tau]);
    CHECK(std::abs(mean - exact[tau]) < 3.0 * se);
  }
  // the local autocovariance of the limit model is the same quantity read at
  // the centre of the synthesis kernel rather than at t
  const auto& psi4 = ws.psi(4);
  double centre = 0;
  for (std::size_t m = 0; m < psi4.size(); ++m) centre += m * psi4[m] * psi4[m];
  const auto c = rlacv(spec, autocorrelation_set(ws), 10, (t + centre) / T, nu, 3);
  for (long tau = 0; tau < 4; ++tau) CHECK(c(tau) == doctest::Approx(exact[tau]).epsilon(0.1));
}

TEST_CASE("constant 0.7 design correlates coefficients on the coherent half") {
  const std::size_t R = 8, T = 64, N = 100;
  const auto spec = builtin_spectrum("sim1");
  const WaveletFamily f(FamilyId::DaubechiesLeastAsymmetric, 10);
  const DiscreteWaveletSet ws(f, 6);
  const auto coh = builtin_coherence("constant07", R, T);
  const auto model = InnovationModel::build(coh);
  int positive = 0;
  for (std::size_t n = 0; n < N; ++n) {
    const auto e = simulate_ensemble(spec, coh, model, ws, R, T, derive_seed(5, n));
    const auto c = transform_ensemble(e, ws);
    double s = 0;
    for (std::size_t k = 8; k < T / 2 - 8; ++k) s += c(kCoherenceScale, k, 5) * c(kCoherenceScale, k, 6);
    positive += s > 0;
  }
  CHECK(positive > 75);
}
