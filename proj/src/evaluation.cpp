#include "rlsw/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "rlsw/error.hpp"
#include "rlsw/parallel.hpp"
#include "rlsw/random.hpp"
#include "rlsw/simulator.hpp"
#include "rlsw/spectral.hpp"

namespace rlsw {

RunAccumulator::RunAccumulator(ScaleField truth, std::size_t exclude)
    : truth_(std::move(truth)), exclude_(exclude) {
  if (2 * exclude_ >= truth_.R) {
    throw ConfigError("excluding " + std::to_string(exclude_) + " replicates at each edge leaves "
                      "nothing to score for R=" + std::to_string(truth_.R));
  }
  sum_.assign(truth_.values.size(), 0.0);
  sum_sq_.assign(truth_.values.size(), 0.0);
}

void RunAccumulator::add(const ScaleField& estimate) {
  if (!estimate.same_shape(truth_)) {
    throw ConfigError("estimate grid (J=" + std::to_string(estimate.J) + ", T=" +
                      std::to_string(estimate.T) + ", R=" + std::to_string(estimate.R) +
                      ") does not match the truth grid");
  }
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    const double d = estimate.values[i] - truth_.values[i];
    sum_[i] += d;
    sum_sq_[i] += d * d;
  }
  ++runs_;
}

MseBias spectrum_mse_bias(const RunAccumulator& acc) {
  if (acc.runs() == 0) throw ConfigError("no runs accumulated");
  const ScaleField& t = acc.truth();
  const double n = static_cast<double>(acc.runs());
  MseBias out;
  double mse = 0.0, bias = 0.0, var = 0.0;
  for (int j = 1; j <= t.J; ++j) {
    for (std::size_t k = 0; k < t.T; ++k) {
      for (std::size_t r = acc.exclude(); r < t.R - acc.exclude(); ++r) {
        const std::size_t i = t.index(j, k, r);
        const double m = acc.sum()[i] / n;
        const double q = acc.sum_sq()[i] / n;
        mse += q;
        bias += m * m;
        var += q - m * m;
        ++out.points;
      }
    }
  }
  const double p = static_cast<double>(out.points);
  out.mse = mse / p;
  out.bias_sq = bias / p;
  out.variance = var / p;
  return out;
}

MseBias spectrum_mse_bias(const RunAccumulator& acc, const SpectrumSpec& truth) {
  const ScaleField& t = acc.truth();
  const ScaleField g = truth.grid(t.J, t.T, t.R);
  if (g.values != t.values) {
    throw ConfigError("spectrum '" + truth.name + "' does not match the accumulator's truth grid");
  }
  return spectrum_mse_bias(acc);
}

CoherenceAccumulator::CoherenceAccumulator(const CoherenceSpec& truth, int J, std::size_t T,
                                           std::size_t R)
    : truth_(truth), J_(J), T_(T), R_(R) {
  if (!truth_.blocks.empty() && (truth_.R != R || truth_.T != T)) {
    throw ConfigError("coherence design grid does not match R, T");
  }
  offsets_.resize(R + 1);
  std::size_t total = 0;
  for (std::size_t d = 0; d < R; ++d) {
    offsets_[d] = total;
    total += static_cast<std::size_t>(J) * T * (R - d);
  }
  offsets_[R] = total;
  sum_.assign(total, 0.0);
  sum_sq_.assign(total, 0.0);
  count_.assign(total, 0);
}

void CoherenceAccumulator::add(const CoherenceEngine& engine, CoherenceStats* stats) {
  if (engine.J() != J_ || engine.T() != T_ || engine.R() != R_) {
    throw ConfigError("coherence engine grid does not match the accumulator");
  }
  if (runs_ == std::numeric_limits<std::uint16_t>::max()) {
    throw ConfigError("coherence accumulator holds at most 65535 runs");
  }
  std::vector<CoherenceStats> per(R_);
  parallel_for(R_, [&](std::size_t delta) {
    const std::size_t n = R_ - delta;
    std::vector<double> rho;
    engine.diagonal(delta, 0, n, rho, &per[delta]);
    const std::size_t base = offsets_[delta];
    for (int j = 1; j <= J_; ++j) {
      for (std::size_t k = 0; k < T_; ++k) {
        const CoherenceBlock* blk = truth_.find(j, k);
        const std::size_t row = (static_cast<std::size_t>(j - 1) * T_ + k) * n;
        for (std::size_t i = 0; i < n; ++i) {
          const double v = rho[row + i];
          if (std::isnan(v)) continue;
          double target = 0.0;
          if (delta == 0) {
            target = 1.0;
          } else if (blk != nullptr) {
            target = blk->matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + delta));
          }
          const double d = v - target;
          sum_[base + row + i] += d;
          sum_sq_[base + row + i] += d * d;
          ++count_[base + row + i];
        }
      }
    }
  });
  if (stats != nullptr) {
    for (const auto& s : per) stats->merge(s);
  }
  ++runs_;
}

MseBias CoherenceAccumulator::result() const {
  if (runs_ == 0) throw ConfigError("no runs accumulated");
  MseBias out;
  double mse = 0.0, bias = 0.0, var = 0.0;
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    const std::size_t c = count_[i];
    out.missing_values += runs_ - c;
    if (c == 0) {
      ++out.missing_points;
      continue;
    }
    const double m = sum_[i] / static_cast<double>(c);
    const double q = sum_sq_[i] / static_cast<double>(c);
    mse += q;
    bias += m * m;
    var += q - m * m;
    ++out.points;
  }
  if (out.points > 0) {
    const double p = static_cast<double>(out.points);
    out.mse = mse / p;
    out.bias_sq = bias / p;
    out.variance = var / p;
  }
  return out;
}

double CoherenceAccumulator::mean_estimate(int j, std::size_t k, std::size_t r,
                                           std::size_t r_prime) const {
  if (j < 1 || j > J_ || k >= T_ || r >= R_ || r_prime >= R_) {
    throw IndexError("coherence point outside the accumulator grid");
  }
  const std::size_t lo = std::min(r, r_prime);
  const std::size_t delta = std::max(r, r_prime) - lo;
  const std::size_t n = R_ - delta;
  const std::size_t i = offsets_[delta] + (static_cast<std::size_t>(j - 1) * T_ + k) * n + lo;
  if (count_[i] == 0) return std::numeric_limits<double>::quiet_NaN();
  return truth_(j, k, lo, lo + delta) + sum_[i] / static_cast<double>(count_[i]);
}

MseBias coherence_mse_bias(const CoherenceAccumulator& acc) { return acc.result(); }

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::LSW: return "LSW";
    case Estimator::RLSW1: return "RLSW1";
    case Estimator::RLSW2: return "RLSW2";
    case Estimator::COH1: return "COH1";
    case Estimator::COH2: return "COH2";
  }
  return "unknown";
}

Estimator parse_estimator(const std::string& s) {
  for (Estimator e : {Estimator::LSW, Estimator::RLSW1, Estimator::RLSW2, Estimator::COH1,
                      Estimator::COH2}) {
    if (s == to_string(e)) return e;
  }
  throw ConfigError("unknown estimator '" + s + "' (expected LSW, RLSW1, RLSW2, COH1 or COH2)");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_coherence(Estimator e) { return e == Estimator::COH1 || e == Estimator::COH2; }

struct SpectralCell {
  Estimator est;
  int M;
  RunAccumulator acc;
  double seconds = 0.0;
};

}  // namespace

std::vector<MseReport> benchmark_table(const Scenario& sc, const ProgressFn& progress) {
  if (sc.runs == 0) throw ConfigError("benchmark needs at least one run");
  if (sc.sizes.empty() || sc.Ms.empty()) throw ConfigError("benchmark needs sizes and M values");
  const SpectrumSpec spec = builtin_spectrum(sc.spectrum);
  const WaveletFamily family =
      sc.family ? *sc.family : WaveletFamily(spec.default_family, spec.default_vanishing_moments);
  auto say = [&](const std::string& s) {
    if (progress) progress(s);
  };

  std::vector<MseReport> reports;
  for (const auto& [R, T] : sc.sizes) {
    const int JT = dyadic_log2(T);
    if (JT < 1) throw InputError("benchmark T=" + std::to_string(T) + " is not a power of two");
    SmoothingConfig base;
    base.alpha = sc.alpha;
    base.truncate_negative = sc.truncate_negative;
    base.MT = sc.MT < 0 ? SmoothingConfig::default_MT(T) : sc.MT;
    const int J = base.resolve_J(T);
    const DiscreteWaveletSet sim_ws(family, JT);
    const Basis basis = make_basis(family, J);
    const CoherenceSpec coh = builtin_coherence(sc.coherence, R, T);
    const InnovationModel model = InnovationModel::build(coh);
    const ScaleField truth = spec.grid(J, T, R);
    auto ensemble_for = [&](std::size_t n) {
      return simulate_ensemble(spec, coh, model, sim_ws, R, T, derive_seed(sc.seed, n));
    };

    std::vector<SpectralCell> cells;
    for (int M : sc.Ms) {
      for (Estimator e : sc.estimators) {
        if (is_coherence(e)) continue;
        SmoothingConfig c = base;
        c.M = M;
        c.validate(R, T);
        cells.push_back(SpectralCell{e, M, RunAccumulator(truth, static_cast<std::size_t>(M))});
      }
    }
    if (!cells.empty()) {
      for (std::size_t n = 0; n < sc.runs; ++n) {
        const ReplicateEnsemble ens = ensemble_for(n);
        const CoefficientField coeffs = transform_ensemble(ens, basis.wavelets);
        for (auto& cell : cells) {
          const auto t0 = Clock::now();
          SmoothingConfig c = base;
          c.M = cell.M;
          if (cell.est == Estimator::RLSW1) c.MT = 0;
          const SpectralEstimate est = cell.est == Estimator::LSW
                                           ? estimate_lsw_average(coeffs, basis, c)
                                           : estimate_rews(coeffs, basis, c);
          cell.acc.add(est);
          cell.seconds += seconds_since(t0);
        }
        if ((n + 1) % 10 == 0 || n + 1 == sc.runs) {
          say("R=" + std::to_string(R) + " T=" + std::to_string(T) + " spectral runs " +
              std::to_string(n + 1) + "/" + std::to_string(sc.runs));
        }
      }
    }

    std::map<std::pair<int, Estimator>, MseReport> by_cell;
    for (auto& cell : cells) {
      const MseBias mb = spectrum_mse_bias(cell.acc);
      MseReport rep;
      rep.scenario = sc.spectrum + (sc.coherence == "none" ? "" : "+" + sc.coherence);
      rep.estimator = to_string(cell.est);
      rep.R = R;
      rep.T = T;
      rep.M = cell.M;
      rep.MT = cell.est == Estimator::RLSW1 ? 0 : base.MT;
      rep.mse = mb.mse;
      rep.bias_sq = mb.bias_sq;
      rep.N = sc.runs;
      rep.wall_time = cell.seconds;
      by_cell[{cell.M, cell.est}] = rep;
    }

    for (int M : sc.Ms) {
      for (Estimator e : sc.estimators) {
        if (!is_coherence(e)) continue;
        CoherencePipelineConfig cc = sc.coherence_config;
        cc.M = M;
        cc.alpha = sc.alpha;
        cc.MT = e == Estimator::COH1 ? 0 : base.MT;
        cc.validate(R, T);
        CoherenceAccumulator acc(coh, J, T, R);
        const auto t0 = Clock::now();
        for (std::size_t n = 0; n < sc.runs; ++n) {
          const ReplicateEnsemble ens = ensemble_for(n);
          const CoefficientField coeffs = transform_ensemble(ens, basis.wavelets);
          const CoherenceEngine engine(coeffs, basis.ipm, cc);
          acc.add(engine);
          if ((n + 1) % 10 == 0 || n + 1 == sc.runs) {
            say("R=" + std::to_string(R) + " T=" + std::to_string(T) + " M=" + std::to_string(M) +
                " " + to_string(e) + " runs " + std::to_string(n + 1) + "/" +
                std::to_string(sc.runs));
          }
        }
        const MseBias mb = acc.result();
        MseReport rep;
        rep.scenario = sc.spectrum + "+" + sc.coherence;
        rep.estimator = to_string(e);
        rep.R = R;
        rep.T = T;
        rep.M = M;
        rep.MT = cc.MT;
        rep.mse = mb.mse;
        rep.bias_sq = mb.bias_sq;
        rep.N = sc.runs;
        rep.missing_values = mb.missing_values;
        rep.wall_time = seconds_since(t0);
        by_cell[{M, e}] = rep;
      }
    }

    for (int M : sc.Ms) {
      for (Estimator e : sc.estimators) reports.push_back(by_cell.at({M, e}));
    }
  }
  return reports;
}

}  // namespace rlsw
