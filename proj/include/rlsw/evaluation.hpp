#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlsw/coherence.hpp"
#include "rlsw/model.hpp"
#include "rlsw/transform.hpp"
#include "rlsw/wavelet.hpp"

namespace rlsw {

/// Streaming per-point sums of (estimate - truth) and its square.
class RunAccumulator {
 public:
  /// Replicates [0, exclude) and [R - exclude, R) are left out of scores.
  RunAccumulator(ScaleField truth, std::size_t exclude);

  void add(const ScaleField& estimate);

  std::size_t runs() const { return runs_; }
  std::size_t exclude() const { return exclude_; }
  const ScaleField& truth() const { return truth_; }
  const std::vector<double>& sum() const { return sum_; }
  const std::vector<double>& sum_sq() const { return sum_sq_; }

 private:
  ScaleField truth_;
  std::size_t exclude_;
  std::size_t runs_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

struct MseBias {
  double mse = 0.0;
  double bias_sq = 0.0;
  double variance = 0.0;        // mean over points of the per-point 1/N variance
  std::size_t points = 0;       // points averaged
  std::size_t missing_points = 0;  // points with no defined estimate (coherence only)
  std::size_t missing_values = 0;  // undefined (run, point) pairs (coherence only)
};

MseBias spectrum_mse_bias(const RunAccumulator& acc);
/// Checks that `truth` evaluates to the accumulator's truth grid.
MseBias spectrum_mse_bias(const RunAccumulator& acc, const SpectrumSpec& truth);

/// Per-pair coherence accumulator over all unordered pairs r' >= r, every
/// scale and location. Memory is about 18 bytes per point.
class CoherenceAccumulator {
 public:
  CoherenceAccumulator(const CoherenceSpec& truth, int J, std::size_t T, std::size_t R);

  /// Streams every diagonal of the engine (parallel over diagonals).
  void add(const CoherenceEngine& engine, CoherenceStats* stats = nullptr);

  std::size_t runs() const { return runs_; }
  MseBias result() const;
  /// Mean estimate over the runs where (j, k, r, r') was defined, NaN if never.
  double mean_estimate(int j, std::size_t k, std::size_t r, std::size_t r_prime) const;

 private:
  std::size_t offset(std::size_t delta) const { return offsets_[delta]; }

  CoherenceSpec truth_;
  int J_;
  std::size_t T_;
  std::size_t R_;
  std::size_t runs_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::vector<std::uint16_t> count_;
};

MseBias coherence_mse_bias(const CoherenceAccumulator& acc);

enum class Estimator { LSW, RLSW1, RLSW2, COH1, COH2 };

const char* to_string(Estimator e);
Estimator parse_estimator(const std::string& s);

struct Scenario {
  std::string spectrum = "sim_main";
  std::string coherence = "none";
  std::optional<WaveletFamily> family;  // defaults to the spectrum's family
  std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (R, T)
  std::vector<int> Ms;
  std::vector<Estimator> estimators{Estimator::LSW, Estimator::RLSW1, Estimator::RLSW2};
  int MT = -1;  // -1: floor(0.05 T)
  double alpha = 1.0;
  bool truncate_negative = false;  // spectral estimators
  CoherencePipelineConfig coherence_config = CoherencePipelineConfig::defaults(
      CoherenceOrder::CorrectThenSmooth);
  std::size_t runs = 100;
  std::uint64_t seed = 1;
};

struct MseReport {
  std::string scenario;
  std::string estimator;
  std::size_t R = 0;
  std::size_t T = 0;
  int M = 0;
  int MT = 0;
  double mse = 0.0;
  double bias_sq = 0.0;
  std::size_t N = 0;
  std::size_t missing_values = 0;
  double wall_time = 0.0;  // seconds, informational only
};

using ProgressFn = std::function<void(const std::string&)>;

/// One report per estimator x (R, T) x M. Run n of every cell uses the
/// seed derive_seed(scenario.seed, n), so all cells share ensembles.
std::vector<MseReport> benchmark_table(const Scenario& scenario, const ProgressFn& progress = {});

}  // namespace rlsw
