#include <cmath>
#include <random>

#include "doctest.h"
#include "rlsw/coherence.hpp"
#include "rlsw/error.hpp"
#include "rlsw/simulator.hpp"

using namespace rlsw;

namespace {

struct Fixture {
  std::size_t R = 16, T = 64;
  Basis basis = make_basis(WaveletFamily(FamilyId::DaubechiesLeastAsymmetric, 4), 6);
  ReplicateEnsemble e;
  CoefficientField coeffs;
  Fixture() {
    const auto spec = builtin_spectrum("white_noise");
    e = simulate_ensemble(spec, builtin_coherence("constant07", R, T), basis.wavelets.family(), R,
                          T, 21);
    coeffs = transform_ensemble(e, basis.wavelets);
  }
};

// Direct evaluation of one coherence value from its definition.
double direct_rho(const CoefficientField& c, const InnerProductMatrix& ipm,
                  const CoherencePipelineConfig& cfg, int j, std::size_t k, std::size_t r,
                  std::size_t rp) {
  const int J = c.J;
  auto weight = [&](int a, int b) {
    const double w = ipm.A_inv(a - 1, b - 1);
    return cfg.nonnegative_correction ? std::max(0.0, w) : w;
  };
  const long M = cfg.M;
  const long R = static_cast<long>(c.R);
  const long lo = std::max(-M, -static_cast<long>(std::min(r, rp)));
  const long hi = std::min(M, R - 1 - static_cast<long>(std::max(r, rp)));
  double num = 0, da = 0, db = 0;
  for (long s = lo; s <= hi; ++s) {
    const std::size_t a = static_cast<std::size_t>(static_cast<long>(r) + s);
    const std::size_t b = static_cast<std::size_t>(static_cast<long>(rp) + s);
    double n1 = 0, a1 = 0, b1 = 0;
    for (int l = 1; l <= J; ++l) {
      n1 += weight(j, l) * c(l, k, a) * c(l, k, b);
      a1 += weight(j, l) * c(l, k, a) * c(l, k, a);
      b1 += weight(j, l) * c(l, k, b) * c(l, k, b);
    }
    if (cfg.truncate_negative && cfg.order == CoherenceOrder::CorrectThenSmooth) {
      a1 = std::max(a1, 0.0);
      b1 = std::max(b1, 0.0);
    }
    num += n1;
    da += a1;
    db += b1;
  }
  if (da <= 0.0 || db <= 0.0) return std::nan("");
  const double n = static_cast<double>(hi - lo + 1);
  double rho = (num / n) / std::sqrt((da / n) * (db / n));
  if (cfg.clamp_to_unit) rho = std::max(-1.0, std::min(1.0, rho));
  return rho;
}

}  // namespace

TEST_CASE("order parsing and defaults") {
  CHECK(parse_coherence_order("cts") == CoherenceOrder::CorrectThenSmooth);
  CHECK(parse_coherence_order("smooth-then-correct") == CoherenceOrder::SmoothThenCorrect);
  CHECK_THROWS_AS(parse_coherence_order("both"), ConfigError);
  const auto cts = CoherencePipelineConfig::defaults(CoherenceOrder::CorrectThenSmooth);
  CHECK(cts.truncate_negative);
  CHECK(cts.nonnegative_correction);
  CHECK(cts.clamp_to_unit);
  const auto stc = CoherencePipelineConfig::defaults(CoherenceOrder::SmoothThenCorrect);
  CHECK_FALSE(stc.truncate_negative);
  CHECK_FALSE(stc.nonnegative_correction);
  CHECK_FALSE(stc.clamp_to_unit);
}

TEST_CASE("engine matches the direct definition") {
  Fixture fx;
  for (bool nonneg : {true, false}) {
    auto cfg = CoherencePipelineConfig::defaults(CoherenceOrder::CorrectThenSmooth);
    cfg.M = 2;
    cfg.nonnegative_correction = nonneg;
    cfg.clamp_to_unit = false;
    const CoherenceEngine engine(fx.coeffs, fx.basis.ipm, cfg);
    for (std::size_t r : {0u, 3u, 15u}) {
      const auto slice = estimate_coherence_slice(engine, kCoherenceScale, r);
      for (std::size_t rp = 0; rp < fx.R; ++rp) {
        for (std::size_t k : {0u, 17u, 40u}) {
          const double got = slice(k, rp);
          const double want = direct_rho(fx.coeffs, fx.basis.ipm, cfg, kCoherenceScale, k, r, rp);
          if (std::isnan(want)) {
            CHECK(std::isnan(got));
          } else if (rp == r) {
            CHECK(got == 1.0);
          } else {
            CHECK(std::abs(got - want) < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("slices are symmetric and pair series agree with slices") {
  Fixture fx;
  auto cfg = CoherencePipelineConfig::defaults(CoherenceOrder::CorrectThenSmooth);
  cfg.M = 3;
  const CoherenceEngine engine(fx.coeffs, fx.basis.ipm, cfg);
  const auto s2 = estimate_coherence_slice(engine, 3, 2);
  const auto s9 = estimate_coherence_slice(engine, 3, 9);
  const auto p = coherence_pair_series(engine, 3, 2, 9);
  REQUIRE(p.size() == fx.T);
  for (std::size_t k = 0; k < fx.T; ++k) {
    CHECK(s2(k, 9) == doctest::Approx(s9(k, 2)).epsilon(1e-12));
    CHECK(p[k] == doctest::Approx(s2(k, 9)).epsilon(1e-12));
    for (std::size_t rp = 0; rp < fx.R; ++rp) {
      if (!std::isnan(s2(k, rp))) CHECK(std::abs(s2(k, rp)) <= 1.0);
    }
  }
  const auto self = coherence_pair_series(engine, 3, 4, 4);
  for (double v : self) CHECK(v == 1.0);
  CHECK_THROWS_AS(estimate_coherence_slice(engine, 7, 0), IndexError);
  CHECK_THROWS_AS(estimate_coherence_slice(engine, 3, 16), IndexError);
}

TEST_CASE("time smoothing inside the engine matches the definition") {
  Fixture fx;
  auto cfg = CoherencePipelineConfig::defaults(CoherenceOrder::SmoothThenCorrect);
  cfg.M = 1;
  cfg.MT = 2;
  const CoherenceEngine engine(fx.coeffs, fx.basis.ipm, cfg);
  std::vector<double> cross, a, b;
  const std::size_t delta = 3;
  engine.spectra(delta, 0, fx.R - delta, &cross, &a, &b);
  const std::size_t w = fx.R - delta;
  const int J = fx.coeffs.J;
  const std::size_t i = 5, k = 1;
  for (int j = 1; j <= J; ++j) {
    double want = 0;
    for (int l = 1; l <= J; ++l) {
      double acc = 0;
      int n = 0;
      for (long s = -1; s <= 1; ++s) {
        for (long t = static_cast<long>(k) - 2; t <= static_cast<long>(k) + 2; ++t) {
          if (t < 0) continue;
          acc += fx.coeffs(l, static_cast<std::size_t>(t), i + s) *
                 fx.coeffs(l, static_cast<std::size_t>(t), i + s + delta);
          ++n;
        }
      }
      want += fx.basis.ipm.A_inv(j - 1, l - 1) * acc / n;
    }
    CHECK(cross[(static_cast<std::size_t>(j - 1) * fx.T + k) * w + i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("cross spectrum of a replicate with itself is its autospectrum") {
  Fixture fx;
  auto cfg = CoherencePipelineConfig::defaults(CoherenceOrder::SmoothThenCorrect);
  cfg.M = 2;
  const auto self = estimate_cross_spectrum(fx.coeffs, 4, 4, fx.basis.ipm, cfg);
  const CoherenceEngine engine(fx.coeffs, fx.basis.ipm, cfg);
  const auto& auto0 = engine.autospectrum();
  for (int j = 1; j <= fx.coeffs.J; ++j) {
    for (std::size_t k = 0; k < fx.T; ++k) {
      CHECK(self.values[static_cast<std::size_t>(j - 1) * fx.T + k] ==
            doctest::Approx(auto0[(static_cast<std::size_t>(j - 1) * fx.T + k) * fx.R + 4]).epsilon(1e-12));
    }
  }
  const auto edge = estimate_cross_spectrum(fx.coeffs, 0, 5, fx.basis.ipm, cfg);
  CHECK(edge.edge_truncated);
  CHECK(edge.window_terms == 3);
}

TEST_CASE("zero data leaves every coherence missing") {
  const std::size_t R = 4, T = 16;
  const Basis basis = make_basis(WaveletFamily(FamilyId::Haar, 1), 4);
  const auto coeffs = transform_ensemble(ReplicateEnsemble::zeros(R, T), basis.wavelets);
  auto cfg = CoherencePipelineConfig::defaults(CoherenceOrder::CorrectThenSmooth);
  cfg.M = 1;
  const CoherenceEngine engine(coeffs, basis.ipm, cfg);
  std::vector<double> rho;
  CoherenceStats st;
  engine.diagonal(1, 0, R - 1, rho, &st);
  CHECK(st.defined == 0);
  CHECK(st.missing == rho.size());
  for (double v : rho) CHECK(std::isnan(v));
}

TEST_CASE("configuration validation") {
  auto cfg = CoherencePipelineConfig::defaults(CoherenceOrder::CorrectThenSmooth);
  cfg.M = 3;
  CHECK_THROWS_AS(cfg.validate(6, 16), ConfigError);
  cfg.M = 1;
  cfg.floor_epsilon = 0;
  CHECK_THROWS_AS(cfg.validate(6, 16), ConfigError);
}
