#include "rlsw/transform.hpp"

#include <algorithm>
#include <cmath>

#include "rlsw/error.hpp"
#include "rlsw/kernels.hpp"
#include "rlsw/parallel.hpp"

namespace rlsw {

ReplicateEnsemble ReplicateEnsemble::zeros(std::size_t R, std::size_t T) {
  ReplicateEnsemble e;
  e.replicates = R;
  e.length = T;
  e.original_replicates = R;
  e.data.assign(R * T, 0.0);
  e.source = "zeros";
  return e;
}

void ReplicateEnsemble::validate(bool estimation) const {
  if (replicates < 1 || length < 2) {
    throw InputError("ensemble needs at least 1 replicate and 2 time points, got R=" +
                     std::to_string(replicates) + ", T=" + std::to_string(length));
  }
  if (data.size() != replicates * length) {
    throw InputError("ensemble data size does not match R x T");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw InputError("non-finite value at replicate " + std::to_string(i / length) +
                       ", time " + std::to_string(i % length));
    }
  }
  if (estimation && dyadic_log2(length) < 1) {
    throw InputError("series length T=" + std::to_string(length) +
                     " is not a power of two; pad or trim the series (replicate counts "
                     "can be completed with mirror_to_dyadic)");
  }
}

const char* to_string(PeriodogramKind kind) {
  switch (kind) {
    case PeriodogramKind::Raw: return "raw";
    case PeriodogramKind::ReplicateSmoothed: return "replicate-smoothed";
    case PeriodogramKind::TimeReplicateSmoothed: return "time-replicate-smoothed";
    case PeriodogramKind::Corrected: return "corrected";
  }
  return "unknown";
}

namespace {

void check_length(std::size_t T, const DiscreteWaveletSet& ws) {
  const int JT = dyadic_log2(T);
  if (JT < 1) {
    throw InputError("series length T=" + std::to_string(T) +
                     " is not a power of two; pad or trim the series (replicate counts "
                     "can be completed with mirror_to_dyadic)");
  }
  if (ws.max_scale() > JT) {
    throw ConfigError("wavelet set has " + std::to_string(ws.max_scale()) +
                      " scales but T=" + std::to_string(T) + " allows at most " +
                      std::to_string(JT));
  }
}

}  // namespace

std::vector<double> ndwt(const double* x, std::size_t T, const DiscreteWaveletSet& ws) {
  check_length(T, ws);
  const auto& K = kernels::active();
  const auto& h = ws.family().low_pass();
  const auto& g = ws.family().high_pass();
  const int J = ws.max_scale();
  std::vector<double> out(static_cast<std::size_t>(J) * T);
  std::vector<double> c(x, x + T);
  std::vector<double> next(T);
  for (int j = 1; j <= J; ++j) {
    const std::size_t stride = std::size_t{1} << (j - 1);
    K.circular_filter(c.data(), out.data() + static_cast<std::size_t>(j - 1) * T, T,
                      g.data(), g.size(), stride);
    if (j < J) {
      K.circular_filter(c.data(), next.data(), T, h.data(), h.size(), stride);
      c.swap(next);
    }
  }
  return out;
}

std::vector<double> ndwt(const std::vector<double>& x, const DiscreteWaveletSet& ws) {
  return ndwt(x.data(), x.size(), ws);
}

std::vector<double> ndwt_adjoint(const std::vector<double>& coeffs, std::size_t T,
                                 const DiscreteWaveletSet& ws) {
  check_length(T, ws);
  const int J = ws.max_scale();
  if (coeffs.size() != static_cast<std::size_t>(J) * T) {
    throw InputError("coefficient array does not hold J x T values");
  }
  const auto& K = kernels::active();
  const auto& h = ws.family().low_pass();
  const auto& g = ws.family().high_pass();
  std::vector<double> u(T, 0.0);
  std::vector<double> next(T);
  for (int j = J; j >= 1; --j) {
    const std::size_t stride = std::size_t{1} << (j - 1);
    std::fill(next.begin(), next.end(), 0.0);
    K.circular_filter_adjoint_add(coeffs.data() + static_cast<std::size_t>(j - 1) * T,
                                  next.data(), T, g.data(), g.size(), stride);
    if (j < J) {
      K.circular_filter_adjoint_add(u.data(), next.data(), T, h.data(), h.size(), stride);
    }
    u.swap(next);
  }
  return u;
}

CoefficientField transform_ensemble(const ReplicateEnsemble& e, const DiscreteWaveletSet& ws) {
  e.validate(true);
  const std::size_t R = e.replicates;
  const std::size_t T = e.length;
  const int J = ws.max_scale();
  CoefficientField field(J, T, R);
  field.basis_label = ws.family().label();
  parallel_for(R, [&](std::size_t r) {
    const std::vector<double> d = ndwt(e.row(r), T, ws);
    for (int j = 1; j <= J; ++j) {
      const double* src = d.data() + static_cast<std::size_t>(j - 1) * T;
      for (std::size_t k = 0; k < T; ++k) field(j, k, r) = src[k];
    }
  });
  return field;
}

PeriodogramField raw_periodogram(const CoefficientField& coeffs) {
  PeriodogramField out(coeffs.J, coeffs.T, coeffs.R);
  out.kind = PeriodogramKind::Raw;
  for (std::size_t i = 0; i < coeffs.values.size(); ++i) {
    out.values[i] = coeffs.values[i] * coeffs.values[i];
  }
  return out;
}

std::vector<double> cross_periodogram(const CoefficientField& coeffs, std::size_t r,
                                      std::size_t r_prime) {
  if (r >= coeffs.R || r_prime >= coeffs.R) {
    throw IndexError("replicate pair (" + std::to_string(r) + ", " + std::to_string(r_prime) +
                     ") outside 0.." + std::to_string(coeffs.R - 1));
  }
  std::vector<double> out(static_cast<std::size_t>(coeffs.J) * coeffs.T);
  for (int j = 1; j <= coeffs.J; ++j) {
    for (std::size_t k = 0; k < coeffs.T; ++k) {
      out[static_cast<std::size_t>(j - 1) * coeffs.T + k] = coeffs(j, k, r) * coeffs(j, k, r_prime);
    }
  }
  return out;
}

}  // namespace rlsw
