#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "rlsw/error.hpp"
#include "rlsw/transform.hpp"

using namespace rlsw;

namespace {

std::vector<double> noise(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (double& x : v) x = nd(gen);
  return v;
}

}  // namespace

TEST_CASE("ndwt matches direct enumeration") {
  const WaveletFamily list[] = {WaveletFamily(FamilyId::Haar, 1),
                                WaveletFamily(FamilyId::DaubechiesExtremalPhase, 2),
                                WaveletFamily(FamilyId::DaubechiesLeastAsymmetric, 4)};
  for (const auto& f : list) {
    for (std::size_t T : {4u, 8u, 16u}) {
      const int J = std::min(4, dyadic_log2(T));
      const DiscreteWaveletSet ws(f, J);
      const auto x = noise(T, static_cast<unsigned>(T));
      const auto d = ndwt(x, ws);
      const auto ref = oracle::ndwt(x, f, J);
      REQUIRE(d.size() == ref.size());
      for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(d[i] - ref[i]) < 1e-12);
    }
  }
}

TEST_CASE("ndwt of Haar on a step") {
  const DiscreteWaveletSet ws(WaveletFamily(FamilyId::Haar, 1), 1);
  const std::vector<double> x{0, 0, 1, 1};
  const auto d = ndwt(x, ws);
  const double r = 1.0 / std::sqrt(2.0);
  // d_k = (x_k - x_{k-1}) / sqrt 2
  CHECK(d[0] == doctest::Approx(-r));
  CHECK(d[1] == doctest::Approx(0.0));
  CHECK(d[2] == doctest::Approx(r));
  CHECK(d[3] == doctest::Approx(0.0));
}

TEST_CASE("adjoint identity") {
  for (const auto& f : {WaveletFamily(FamilyId::Haar, 1),
                        WaveletFamily(FamilyId::DaubechiesLeastAsymmetric, 6)}) {
    const std::size_t T = 64;
    const DiscreteWaveletSet ws(f, 6);
    const auto x = noise(T, 3);
    const auto c = noise(6 * T, 4);
    const auto d = ndwt(x, ws);
    const auto y = ndwt_adjoint(c, T, ws);
    double lhs = 0, rhs = 0;
    for (std::size_t i = 0; i < d.size(); ++i) lhs += d[i] * c[i];
    for (std::size_t t = 0; t < T; ++t) rhs += x[t] * y[t];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("ensemble transform and periodograms") {
  const std::size_t R = 5, T = 32;
  const DiscreteWaveletSet ws(WaveletFamily(FamilyId::DaubechiesLeastAsymmetric, 4), 5);
  ReplicateEnsemble e = ReplicateEnsemble::zeros(R, T);
  e.data = noise(R * T, 9);
  const CoefficientField c = transform_ensemble(e, ws);
  CHECK(c.J == 5);
  CHECK(c.T == T);
  CHECK(c.R == R);
  for (std::size_t r = 0; r < R; ++r) {
    const auto d = ndwt(e.row(r), T, ws);
    for (int j = 1; j <= 5; ++j) {
      for (std::size_t k = 0; k < T; ++k) CHECK(c(j, k, r) == d[(j - 1) * T + k]);
    }
  }
  const PeriodogramField I = raw_periodogram(c);
  CHECK(I.kind == PeriodogramKind::Raw);
  CHECK(I(3, 7, 2) == c(3, 7, 2) * c(3, 7, 2));
  const auto cp = cross_periodogram(c, 1, 4);
  CHECK(cp[(2 - 1) * T + 5] == c(2, 5, 1) * c(2, 5, 4));
  CHECK_THROWS_AS(cross_periodogram(c, 1, 5), IndexError);
}

TEST_CASE("ensemble validation") {
  ReplicateEnsemble e = ReplicateEnsemble::zeros(2, 6);
  CHECK_NOTHROW(e.validate(false));
  CHECK_THROWS_AS(e.validate(true), InputError);
  e = ReplicateEnsemble::zeros(2, 8);
  e.data[3] = std::nan("");
  CHECK_THROWS_AS(e.validate(false), InputError);
}
