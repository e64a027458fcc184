#include "rlsw/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rlsw/error.hpp"
#include "rlsw/kernels.hpp"
#include "rlsw/parallel.hpp"
#include "smoothing_internal.hpp"

namespace rlsw {

const char* to_string(CoherenceOrder order) {
  return order == CoherenceOrder::CorrectThenSmooth ? "correct-then-smooth"
                                                    : "smooth-then-correct";
}

CoherenceOrder parse_coherence_order(std::string_view s) {
  if (s == "correct-then-smooth" || s == "cts") return CoherenceOrder::CorrectThenSmooth;
  if (s == "smooth-then-correct" || s == "stc") return CoherenceOrder::SmoothThenCorrect;
  throw ConfigError("unknown order '" + std::string(s) +
                    "' (expected correct-then-smooth or smooth-then-correct)");
}

CoherencePipelineConfig CoherencePipelineConfig::defaults(CoherenceOrder order) {
  CoherencePipelineConfig c;
  c.order = order;
  const bool cts = order == CoherenceOrder::CorrectThenSmooth;
  c.truncate_negative = cts;
  c.nonnegative_correction = cts;
  c.clamp_to_unit = cts;
  return c;
}

void CoherencePipelineConfig::validate(std::size_t R, std::size_t T) const {
  if (M < 0 || static_cast<std::size_t>(2 * M + 1) > R) {
    throw ConfigError("M=" + std::to_string(M) + " gives a window wider than R=" + std::to_string(R));
  }
  if (MT < 0 || static_cast<std::size_t>(2 * MT + 1) > T) {
    throw ConfigError("MT=" + std::to_string(MT) + " gives a window wider than T=" +
                      std::to_string(T));
  }
  if (!(floor_epsilon > 0.0)) throw ConfigError("floor_epsilon must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
}

void CoherenceStats::merge(const CoherenceStats& o) {
  defined += o.defined;
  missing += o.missing;
  clamped += o.clamped;
  max_abs = std::max(max_abs, o.max_abs);
}

namespace {

void clamp_at_zero(std::vector<double>& v) {
  for (double& x : v) x = x < 0.0 ? 0.0 : x;
}

CoherenceStats form_ratio(const double* num, const double* a, const double* b, std::size_t n,
                          bool self_pair, double floor, bool clamp_to_unit, double* rho) {
  kernels::active().coherence_ratio(num, a, b, floor, rho, n);
  CoherenceStats st;
  for (std::size_t q = 0; q < n; ++q) {
    double& v = rho[q];
    if (std::isnan(v)) {
      ++st.missing;
      continue;
    }
    ++st.defined;
    if (self_pair) {
      v = 1.0;
      st.max_abs = std::max(st.max_abs, 1.0);
      continue;
    }
    const double mag = std::abs(v);
    st.max_abs = std::max(st.max_abs, mag);
    if (clamp_to_unit && mag > 1.0) {
      v = v > 0.0 ? 1.0 : -1.0;
      ++st.clamped;
    }
  }
  return st;
}

}  // namespace

CoherenceEngine::CoherenceEngine(const CoefficientField& coeffs, const InnerProductMatrix& ipm,
                                 const CoherencePipelineConfig& cfg)
    : cfg_(cfg), J_(coeffs.J), T_(coeffs.T), R_(coeffs.R), coeffs_(&coeffs) {
  cfg_.validate(R_, T_);
  const int JT = dyadic_log2(T_);
  const int J_expected = static_cast<int>(std::floor(cfg_.alpha * JT + 1e-12));
  if (ipm.J != J_ || J_ != J_expected) {
    throw ConfigError("coefficients have " + std::to_string(J_) + " scales, matrix " +
                      std::to_string(ipm.J) + ", configuration needs J=" +
                      std::to_string(J_expected));
  }
  const auto& K = kernels::active();
  const std::size_t J = static_cast<std::size_t>(J_);
  const std::size_t TR = T_ * R_;
  w_.resize(J * J);
  for (std::size_t a = 0; a < J; ++a) {
    for (std::size_t b = 0; b < J; ++b) {
      w_[a * J + b] = ipm.A_inv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (cfg_.nonnegative_correction) w_[a * J + b] = std::max(0.0, w_[a * J + b]);
    }
  }

  std::vector<double> sq(coeffs.values.size());
  K.multiply(coeffs.values.data(), coeffs.values.data(), sq.data(), sq.size());
  if (cfg_.order == CoherenceOrder::CorrectThenSmooth) {
    std::vector<double> q(sq.size());
    K.mix_rows(w_.data(), J, sq.data(), q.data(), TR);
    if (cfg_.truncate_negative) clamp_at_zero(q);
    sq.swap(q);
  }
  if (cfg_.MT > 0) {
    base_.resize(sq.size());
    detail::window_mean(sq.data(), base_.data(), J, T_, R_, cfg_.MT);
  } else {
    base_.swap(sq);
  }

  auto0_.resize(base_.size());
  detail::window_mean(base_.data(), auto0_.data(), J * T_, R_, 1, cfg_.M);
  if (cfg_.order == CoherenceOrder::SmoothThenCorrect) {
    std::vector<double> corrected(auto0_.size());
    K.mix_rows(w_.data(), J, auto0_.data(), corrected.data(), TR);
    if (cfg_.truncate_negative) clamp_at_zero(corrected);
    auto0_.swap(corrected);
  }
  double peak = 0.0;
  for (double v : auto0_) peak = std::max(peak, v);
  floor_ = cfg_.floor_epsilon * peak;
}

void CoherenceEngine::spectra(std::size_t delta, std::size_t ib, std::size_t ie,
                              std::vector<double>* cross, std::vector<double>* auto_a,
                              std::vector<double>* auto_b) const {
  if (delta >= R_) throw IndexError("replicate offset " + std::to_string(delta) + " >= R");
  const std::size_t n = R_ - delta;
  if (ib >= ie || ie > n) throw IndexError("pair range outside the diagonal");
  const auto& K = kernels::active();
  const std::size_t J = static_cast<std::size_t>(J_);
  const std::size_t w = ie - ib;
  const std::size_t rows = J * T_;
  const int M = cfg_.M;
  const bool stc = cfg_.order == CoherenceOrder::SmoothThenCorrect;

  if (cross != nullptr) {
    const std::size_t e0 = ib > static_cast<std::size_t>(M) ? ib - static_cast<std::size_t>(M) : 0;
    const std::size_t e1 = std::min(n, ie + static_cast<std::size_t>(M));
    const std::size_t ext = e1 - e0;
    std::vector<double> prod(rows * ext);
    const double* d = coeffs_->values.data();
    for (std::size_t row = 0; row < rows; ++row) {
      K.multiply(d + row * R_ + e0, d + row * R_ + e0 + delta, prod.data() + row * ext, ext);
    }
    if (cfg_.MT > 0) {
      std::vector<double> tmp(prod.size());
      detail::window_mean(prod.data(), tmp.data(), J, T_, ext, cfg_.MT);
      prod.swap(tmp);
    }
    std::vector<double> sm(rows * w);
    detail::window_mean_rows(prod.data(), ext, e0, rows, n, ib, ie, M, sm.data());
    cross->resize(rows * w);
    K.mix_rows(w_.data(), J, sm.data(), cross->data(), T_ * w);
  }

  auto side = [&](std::size_t offset, std::vector<double>* out) {
    if (out == nullptr) return;
    out->resize(rows * w);
    if (!stc) {
      detail::window_mean_rows(base_.data() + offset, R_, 0, rows, n, ib, ie, M, out->data());
      return;
    }
    std::vector<double> sm(rows * w);
    detail::window_mean_rows(base_.data() + offset, R_, 0, rows, n, ib, ie, M, sm.data());
    K.mix_rows(w_.data(), J, sm.data(), out->data(), T_ * w);
    if (cfg_.truncate_negative) clamp_at_zero(*out);
  };
  side(0, auto_a);
  side(delta, auto_b);
}

void CoherenceEngine::diagonal(std::size_t delta, std::size_t ib, std::size_t ie,
                               std::vector<double>& rho, CoherenceStats* stats) const {
  std::vector<double> num, a, b;
  spectra(delta, ib, ie, &num, &a, &b);
  rho.resize(num.size());
  const CoherenceStats local = form_ratio(num.data(), a.data(), b.data(), num.size(), delta == 0,
                                          floor_, cfg_.clamp_to_unit, rho.data());
  if (stats != nullptr) stats->merge(local);
}

CrossSpectrumResult estimate_cross_spectrum(const CoefficientField& coeffs, std::size_t r,
                                            std::size_t r_prime, const InnerProductMatrix& ipm,
                                            const CoherencePipelineConfig& cfg) {
  if (r >= coeffs.R || r_prime >= coeffs.R) {
    throw IndexError("replicate pair (" + std::to_string(r) + ", " + std::to_string(r_prime) +
                     ") outside 0.." + std::to_string(coeffs.R - 1));
  }
  const CoherenceEngine engine(coeffs, ipm, cfg);
  const std::size_t delta = r > r_prime ? r - r_prime : r_prime - r;
  const std::size_t i = std::min(r, r_prime);
  CrossSpectrumResult out;
  if (delta == 0) {
    engine.spectra(0, i, i + 1, nullptr, &out.values, nullptr);
  } else {
    engine.spectra(delta, i, i + 1, &out.values, nullptr, nullptr);
  }
  out.window_terms = detail::window_count(i, coeffs.R - delta, cfg.M);
  out.edge_truncated = out.window_terms < static_cast<std::size_t>(2 * cfg.M + 1);
  return out;
}

CoherenceSlice estimate_coherence_slice(const CoherenceEngine& engine, int j, std::size_t r) {
  if (j < 1 || j > engine.J()) {
    throw IndexError("level " + std::to_string(j) + " outside 1.." + std::to_string(engine.J()));
  }
  const std::size_t R = engine.R();
  const std::size_t T = engine.T();
  if (r >= R) throw IndexError("replicate " + std::to_string(r) + " outside 0.." + std::to_string(R - 1));
  CoherenceSlice slice;
  slice.j = j;
  slice.r = r;
  slice.T = T;
  slice.R = R;
  slice.config = engine.config();
  slice.values.assign(T * R, 0.0);
  std::vector<CoherenceStats> stats(R);
  const std::size_t off = static_cast<std::size_t>(j - 1) * T;
  parallel_for(R, [&](std::size_t rp) {
    const std::size_t delta = r > rp ? r - rp : rp - r;
    const std::size_t i = std::min(r, rp);
    std::vector<double> num, a, b, rho(T);
    engine.spectra(delta, i, i + 1, &num, &a, &b);
    stats[rp] = form_ratio(num.data() + off, a.data() + off, b.data() + off, T, delta == 0,
                           engine.floor(), engine.config().clamp_to_unit, rho.data());
    for (std::size_t k = 0; k < T; ++k) slice.values[k * R + rp] = rho[k];
  });
  CoherenceStats total;
  for (const auto& st : stats) total.merge(st);
  slice.missing = total.missing;
  slice.clamp_fraction = total.clamp_fraction();
  return slice;
}

CoherenceSlice estimate_coherence_slice(const ReplicateEnsemble& ensemble, const Basis& basis,
                                        int j, std::size_t r, const CoherencePipelineConfig& cfg) {
  const CoefficientField coeffs = transform_ensemble(ensemble, basis.wavelets);
  const CoherenceEngine engine(coeffs, basis.ipm, cfg);
  return estimate_coherence_slice(engine, j, r);
}

std::vector<double> coherence_pair_series(const CoherenceEngine& engine, int j, std::size_t r,
                                          std::size_t r_prime) {
  if (j < 1 || j > engine.J()) {
    throw IndexError("level " + std::to_string(j) + " outside 1.." + std::to_string(engine.J()));
  }
  if (r >= engine.R() || r_prime >= engine.R()) {
    throw IndexError("replicate pair outside 0.." + std::to_string(engine.R() - 1));
  }
  const std::size_t delta = r > r_prime ? r - r_prime : r_prime - r;
  const std::size_t i = std::min(r, r_prime);
  std::vector<double> rho;
  engine.diagonal(delta, i, i + 1, rho);
  const auto first = rho.begin() + static_cast<long>(static_cast<std::size_t>(j - 1) * engine.T());
  return std::vector<double>(first, first + static_cast<long>(engine.T()));
}

std::vector<double> coherence_pair_series(const ReplicateEnsemble& ensemble, const Basis& basis,
                                          int j, std::size_t r, std::size_t r_prime,
                                          const CoherencePipelineConfig& cfg) {
  const CoefficientField coeffs = transform_ensemble(ensemble, basis.wavelets);
  const CoherenceEngine engine(coeffs, basis.ipm, cfg);
  return coherence_pair_series(engine, j, r, r_prime);
}

}  // namespace rlsw
