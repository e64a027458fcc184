#include "rlsw/wavelet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "rlsw/error.hpp"
#include "wavelet/daubechies_tables.hpp"

namespace rlsw {
namespace {

// Convolution with taps spread `step` apart (zeros in between).
std::vector<double> convolve_upsampled(const std::vector<double>& a,
                                       const std::vector<double>& taps,
                                       std::size_t step) {
  std::vector<double> out(a.size() + (taps.size() - 1) * step, 0.0);
  for (std::size_t m = 0; m < taps.size(); ++m) {
    const double t = taps[m];
    if (t == 0.0) continue;
    double* dst = out.data() + m * step;
    for (std::size_t i = 0; i < a.size(); ++i) dst[i] += t * a[i];
  }
  return out;
}

std::vector<double> self_correlation(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<double> out(2 * n - 1, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double s = 0.0;
    for (std::size_t k = m; k < n; ++k) s += f[k] * f[k - m];
    out[n - 1 + m] = s;
    out[n - 1 - m] = s;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

WaveletFamily::WaveletFamily(FamilyId id, int vanishing_moments)
    : id_(id), vm_(vanishing_moments) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (id) {
    case FamilyId::Haar:
      if (vm_ != 1) throw ConfigError("haar wavelet has exactly 1 vanishing moment");
      h_ = {r, r};
      break;
    case FamilyId::DaubechiesExtremalPhase:
      if (vm_ == 1) {
        h_ = {r, r};
      } else {
        auto taps = detail::extremal_phase_taps(vm_);
        if (taps.empty()) {
          throw ConfigError("extremal-phase Daubechies wavelets support 1..10 "
                            "vanishing moments, got " + std::to_string(vm_));
        }
        h_.assign(taps.begin(), taps.end());
      }
      break;
    case FamilyId::DaubechiesLeastAsymmetric: {
      auto taps = detail::least_asymmetric_taps(vm_);
      if (taps.empty()) {
        throw ConfigError("least-asymmetric Daubechies wavelets support 2..10 "
                          "vanishing moments, got " + std::to_string(vm_));
      }
      h_.assign(taps.begin(), taps.end());
      break;
    }
  }
  const std::size_t L = h_.size();
  g_.resize(L);
  for (std::size_t k = 0; k < L; ++k) {
    g_[k] = (k % 2 == 0 ? 1.0 : -1.0) * h_[L - 1 - k];
  }
  if (g_[0] < 0.0) {
    for (double& v : g_) v = -v;
  }
}

WaveletFamily WaveletFamily::parse(std::string_view name, int vanishing_moments) {
  const std::string n = lower(name);
  if (n == "haar") return WaveletFamily(FamilyId::Haar, vanishing_moments);
  if (n == "daubechies_extremal_phase" || n == "extremal_phase" || n == "ep" ||
      n == "db" || n == "daubexphase") {
    return WaveletFamily(FamilyId::DaubechiesExtremalPhase, vanishing_moments);
  }
  if (n == "daubechies_least_asymmetric" || n == "least_asymmetric" ||
      n == "la" || n == "sym" || n == "daubleasymm") {
    return WaveletFamily(FamilyId::DaubechiesLeastAsymmetric, vanishing_moments);
  }
  throw ConfigError("unknown wavelet family '" + std::string(name) +
                    "' (expected haar, daubechies_extremal_phase or "
                    "daubechies_least_asymmetric)");
}

std::string WaveletFamily::name() const {
  switch (id_) {
    case FamilyId::Haar: return "haar";
    case FamilyId::DaubechiesExtremalPhase: return "daubechies_extremal_phase";
    case FamilyId::DaubechiesLeastAsymmetric: return "daubechies_least_asymmetric";
  }
  return "unknown";
}

std::string WaveletFamily::label() const {
  switch (id_) {
    case FamilyId::Haar: return "Haar";
    case FamilyId::DaubechiesExtremalPhase: return "EP" + std::to_string(vm_);
    case FamilyId::DaubechiesLeastAsymmetric: return "LA" + std::to_string(vm_);
  }
  return "unknown";
}

DiscreteWaveletSet::DiscreteWaveletSet(const WaveletFamily& family, int J)
    : family_(family) {
  if (J < 1 || J > 20) {
    throw ConfigError("number of scales must be in 1..20, got " + std::to_string(J));
  }
  psi_.reserve(static_cast<std::size_t>(J));
  std::vector<double> low{1.0};
  for (int j = 1; j <= J; ++j) {
    const std::size_t step = std::size_t{1} << (j - 1);
    psi_.push_back(convolve_upsampled(low, family.high_pass(), step));
    if (j < J) low = convolve_upsampled(low, family.low_pass(), step);
  }
}

const std::vector<double>& DiscreteWaveletSet::psi(int j) const {
  if (j < 1 || j > max_scale()) {
    throw IndexError("scale " + std::to_string(j) + " outside 1.." +
                     std::to_string(max_scale()));
  }
  return psi_[static_cast<std::size_t>(j - 1)];
}

DiscreteWaveletSet build_discrete_wavelets(const WaveletFamily& family, int J) {
  return DiscreteWaveletSet(family, J);
}

double LagSequence::operator()(long tau) const {
  const long i = tau - min_lag;
  if (i < 0 || i >= static_cast<long>(values.size())) return 0.0;
  return values[static_cast<std::size_t>(i)];
}

AutocorrelationSet autocorrelation_set(const DiscreteWaveletSet& ws) {
  const auto& fam = ws.family();
  const std::vector<double> rh = self_correlation(fam.low_pass());
  const std::vector<double> rg = self_correlation(fam.high_pass());

  AutocorrelationSet out;
  std::vector<double> rlow{1.0};
  for (int j = 1; j <= ws.max_scale(); ++j) {
    const std::size_t step = std::size_t{1} << (j - 1);
    std::vector<double> full = convolve_upsampled(rlow, rg, step);
    if (j < ws.max_scale()) rlow = convolve_upsampled(rlow, rh, step);

    // full is centred; mirror the non-negative half so symmetry is exact.
    const std::size_t c = full.size() / 2;
    for (std::size_t m = 1; m <= c; ++m) full[c - m] = full[c + m];
    LagSequence seq;
    seq.min_lag = -static_cast<long>(c);
    seq.values = std::move(full);
    out.Psi.push_back(std::move(seq));
  }
  return out;
}

LagSequence autocorrelation_wavelet(const DiscreteWaveletSet& ws, int j) {
  (void)ws.psi(j);
  DiscreteWaveletSet trimmed(ws.family(), j);
  return autocorrelation_set(trimmed).Psi.back();
}

LagSequence cross_correlation_wavelet(const DiscreteWaveletSet& ws, int j, int l) {
  const auto& a = ws.psi(j);
  const auto& b = ws.psi(l);
  const long la = static_cast<long>(a.size());
  const long lb = static_cast<long>(b.size());
  LagSequence seq;
  seq.min_lag = -(lb - 1);
  seq.values.assign(static_cast<std::size_t>(la + lb - 1), 0.0);
  for (long tau = seq.min_lag; tau <= la - 1; ++tau) {
    const long k0 = std::max(0L, tau);
    const long k1 = std::min(la - 1, tau + lb - 1);
    double s = 0.0;
    for (long k = k0; k <= k1; ++k) {
      s += a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k - tau)];
    }
    seq.values[static_cast<std::size_t>(tau - seq.min_lag)] = s;
  }
  return seq;
}

InnerProductMatrix inner_product_matrix(const AutocorrelationSet& acs,
                                        const std::string& family_label) {
  const int J = static_cast<int>(acs.Psi.size());
  InnerProductMatrix ipm;
  ipm.J = J;
  ipm.A.resize(J, J);
  for (int j = 0; j < J; ++j) {
    for (int l = j; l < J; ++l) {
      const LagSequence& a = acs.Psi[static_cast<std::size_t>(j)];
      const LagSequence& b = acs.Psi[static_cast<std::size_t>(l)];
      const long lo = std::max(a.min_lag, b.min_lag);
      const long hi = std::min(a.max_lag(), b.max_lag());
      double s = 0.0;
      for (long tau = lo; tau <= hi; ++tau) s += a(tau) * b(tau);
      ipm.A(j, l) = s;
      ipm.A(l, j) = s;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ipm.A);
  const bool invertible = lu.isInvertible();
  if (invertible) ipm.A_inv = lu.inverse();
  const double norm_a = ipm.A.cwiseAbs().colwise().sum().maxCoeff();
  const double norm_inv =
      invertible ? ipm.A_inv.cwiseAbs().colwise().sum().maxCoeff() : INFINITY;
  ipm.condition_estimate = norm_a * norm_inv;
  if (!invertible || !(ipm.condition_estimate <= 1e12)) {
    std::ostringstream msg;
    msg << "inner product matrix is numerically singular (J=" << J
        << ", family=" << family_label
        << ", condition estimate=" << ipm.condition_estimate << ")";
    throw LinAlgError(msg.str());
  }
  return ipm;
}

InnerProductMatrix inner_product_matrix(const DiscreteWaveletSet& ws) {
  return inner_product_matrix(autocorrelation_set(ws), ws.family().label());
}

Basis make_basis(const WaveletFamily& family, int J) {
  DiscreteWaveletSet ws(family, J);
  AutocorrelationSet acs = autocorrelation_set(ws);
  InnerProductMatrix ipm = inner_product_matrix(acs, family.label());
  return Basis{std::move(ws), std::move(acs), std::move(ipm)};
}

int dyadic_log2(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) return -1;
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace rlsw
