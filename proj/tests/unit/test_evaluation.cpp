#include <cmath>
#include <random>

#include "doctest.h"
#include "rlsw/error.hpp"
#include "rlsw/evaluation.hpp"
#include "rlsw/random.hpp"
#include "rlsw/simulator.hpp"

using namespace rlsw;

TEST_CASE("perfect estimates score zero") {
  const auto spec = builtin_spectrum("sim_main");
  const ScaleField truth = spec.grid(8, 32, 16);
  RunAccumulator acc(truth, 2);
  acc.add(truth);
  acc.add(truth);
  const MseBias mb = spectrum_mse_bias(acc, spec);
  CHECK(mb.mse == 0.0);
  CHECK(mb.bias_sq == 0.0);
  CHECK(mb.points == 8u * 32u * 12u);
  CHECK_THROWS_AS(spectrum_mse_bias(acc, builtin_spectrum("sim1")), ConfigError);
  CHECK_THROWS_AS(acc.add(ScaleField(8, 32, 8)), ConfigError);
  CHECK_THROWS_AS(RunAccumulator(truth, 8), ConfigError);
}

TEST_CASE("mse decomposes into squared bias and variance") {
  const ScaleField truth(2, 8, 10);
  RunAccumulator acc(truth, 1);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd(0.3, 1.0);
  std::vector<ScaleField> runs;
  for (int n = 0; n < 7; ++n) {
    ScaleField e(2, 8, 10);
    for (double& v : e.values) v = nd(gen);
    acc.add(e);
    runs.push_back(e);
  }
  const MseBias mb = spectrum_mse_bias(acc);
  CHECK(std::abs(mb.mse - (mb.bias_sq + mb.variance)) < 1e-10);
  // direct evaluation with the edge mask
  double mse = 0, bias = 0;
  std::size_t pts = 0;
  for (int j = 1; j <= 2; ++j) {
    for (std::size_t k = 0; k < 8; ++k) {
      for (std::size_t r = 1; r < 9; ++r, ++pts) {
        double m = 0, q = 0;
        for (const auto& e : runs) {
          m += e(j, k, r);
          q += e(j, k, r) * e(j, k, r);
        }
        m /= runs.size();
        mse += q / runs.size();
        bias += m * m;
      }
    }
  }
  CHECK(mb.mse == doctest::Approx(mse / pts).epsilon(1e-12));
  CHECK(mb.bias_sq == doctest::Approx(bias / pts).epsilon(1e-12));

  // the mask selects indices only
  RunAccumulator wide(truth, 0);
  for (const auto& e : runs) wide.add(e);
  CHECK(wide.sum() == acc.sum());
}

TEST_CASE("coherence scores follow the pair-count normalization") {
  const std::size_t R = 6, T = 16, N = 3;
  const int J = 4;
  const Basis basis = make_basis(WaveletFamily(FamilyId::Haar, 1), J);
  const auto spec = builtin_spectrum("white_noise");
  const auto coh = builtin_coherence("constant07", R, T);
  auto cfg = CoherencePipelineConfig::defaults(CoherenceOrder::CorrectThenSmooth);
  cfg.M = 1;
  CoherenceAccumulator acc(coh, J, T, R);
  std::vector<double> sum(J * T * R * R, 0.0), sum_sq(sum.size(), 0.0);
  std::vector<int> count(sum.size(), 0);
  for (std::size_t n = 0; n < N; ++n) {
    const auto e = simulate_ensemble(spec, coh, basis.wavelets.family(), R, T, derive_seed(3, n));
    const auto c = transform_ensemble(e, basis.wavelets);
    const CoherenceEngine engine(c, basis.ipm, cfg);
    acc.add(engine);
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t rp = r; rp < R; ++rp) {
        for (int j = 1; j <= J; ++j) {
          const auto s = coherence_pair_series(engine, j, r, rp);
          for (std::size_t k = 0; k < T; ++k) {
            if (std::isnan(s[k])) continue;
            const double d = s[k] - coh(j, k, r, rp);
            const std::size_t i = ((static_cast<std::size_t>(j - 1) * T + k) * R + r) * R + rp;
            sum[i] += d;
            sum_sq[i] += d * d;
            ++count[i];
          }
        }
      }
    }
  }
  double mse = 0, bias = 0;
  std::size_t pts = 0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (count[i] == 0) continue;
    mse += sum_sq[i] / count[i];
    const double m = sum[i] / count[i];
    bias += m * m;
    ++pts;
  }
  const MseBias mb = coherence_mse_bias(acc);
  CHECK(mb.points + mb.missing_points == static_cast<std::size_t>(J) * T * R * (R + 1) / 2);
  CHECK(mb.points == pts);
  CHECK(mb.mse == doctest::Approx(mse / pts).epsilon(1e-12));
  CHECK(mb.bias_sq == doctest::Approx(bias / pts).epsilon(1e-12));
  CHECK(std::abs(mb.mse - mb.bias_sq - mb.variance) < 1e-10);
}

TEST_CASE("benchmark on a zero spectrum scores zero") {
  Scenario sc;
  sc.spectrum = "zero";
  sc.family = WaveletFamily(FamilyId::Haar, 1);
  sc.sizes = {{16, 32}};
  sc.Ms = {2};
  sc.runs = 2;
  const auto reports = benchmark_table(sc);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    CHECK(r.mse == 0.0);
    CHECK(r.bias_sq == 0.0);
    CHECK(r.N == 2);
  }
  CHECK(reports[0].estimator == "LSW");
  CHECK(reports[1].MT == 0);
  CHECK(reports[2].MT == 1);
}

TEST_CASE("benchmark rows are reproducible") {
  Scenario sc;
  sc.spectrum = "sim_main";
  sc.sizes = {{32, 64}};
  sc.Ms = {3};
  sc.runs = 3;
  sc.estimators = {Estimator::RLSW1};
  const auto a = benchmark_table(sc);
  const auto b = benchmark_table(sc);
  CHECK(a[0].mse == b[0].mse);
  CHECK(a[0].bias_sq == b[0].bias_sq);
  CHECK(parse_estimator("RLSW2") == Estimator::RLSW2);
  CHECK_THROWS_AS(parse_estimator("RLSW3"), ConfigError);
}
