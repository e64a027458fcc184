#include "rlsw/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlsw/coherence.hpp"
#include "rlsw/error.hpp"
#include "rlsw/evaluation.hpp"
#include "rlsw/io.hpp"
#include "rlsw/simulator.hpp"
#include "rlsw/spectral.hpp"

namespace rlsw {
namespace {

using nlohmann::json;

struct CommonOptions {
  std::uint64_t seed = 1;
  std::string family;
  int vanishing_moments = 0;
  int M = -1;
  int MT = -1;
  double alpha = 1.0;
  std::string order = "correct-then-smooth";
  std::optional<bool> truncate_negative;
  std::string out;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--seed", o.seed, "Base seed for simulation")->capture_default_str();
  app->add_option("--family", o.family,
                  "Wavelet family: haar, daubechies_extremal_phase, daubechies_least_asymmetric");
  app->add_option("--vanishing-moments", o.vanishing_moments, "Vanishing moments of the family");
  app->add_option("--M", o.M, "Replicate half-window (default: rule of thumb)");
  app->add_option("--MT", o.MT, "Time half-window (0 disables time smoothing)");
  app->add_option("--alpha", o.alpha, "Scale truncation fraction in (0,1]")->capture_default_str();
  app->add_option("--order", o.order, "Coherence order: correct-then-smooth | smooth-then-correct")
      ->capture_default_str();
  app->add_option("--truncate-negative", o.truncate_negative,
                  "Clamp negative corrected spectra at zero (true/false)");
  app->add_option("--out", o.out, "Output path prefix")->required();
}

int default_vm(FamilyId id) {
  switch (id) {
    case FamilyId::Haar: return 1;
    case FamilyId::DaubechiesExtremalPhase: return 2;
    case FamilyId::DaubechiesLeastAsymmetric: return 6;
  }
  return 1;
}

WaveletFamily resolve_family(const CommonOptions& o, FamilyId fallback_id, int fallback_vm) {
  if (o.family.empty()) {
    return WaveletFamily(fallback_id, o.vanishing_moments > 0 ? o.vanishing_moments : fallback_vm);
  }
  if (o.vanishing_moments > 0) return WaveletFamily::parse(o.family, o.vanishing_moments);
  const FamilyId id = WaveletFamily::parse(o.family, o.family == "haar" ? 1 : 2).id();
  return WaveletFamily(id, id == fallback_id ? fallback_vm : default_vm(id));
}

json sidecar(const std::string& command, const CommonOptions& o, const WaveletFamily& fam, int J,
             int M, int MT, bool truncate, const std::string& digest) {
  return json{{"command", command},
              {"version", RLSW_VERSION},
              {"seed", o.seed},
              {"family", fam.name()},
              {"vanishing_moments", fam.vanishing_moments()},
              {"J", J},
              {"alpha", o.alpha},
              {"M", M},
              {"MT", MT},
              {"order", o.order},
              {"truncate_negative", truncate},
              {"input_digest", digest.empty() ? json(nullptr) : json(digest)}};
}

void write_sidecar(const std::string& prefix, const json& meta) {
  write_file(prefix + ".meta.json", meta.dump(2) + "\n");
}

struct IngestOptions {
  std::string input;
  bool header = false;
  bool columns = false;
  bool standardize = false;
  bool mirror = false;
};

void add_ingest(CLI::App* app, IngestOptions& o) {
  app->add_option("--input", o.input, "Ensemble CSV")->required();
  app->add_flag("--header", o.header, "First line is a header");
  app->add_flag("--columns", o.columns, "Replicates are stored as columns");
  app->add_flag("--standardize", o.standardize, "Standardise each replicate");
  app->add_flag("--mirror", o.mirror, "Mirror replicates up to the next power of two");
}

ReplicateEnsemble ingest(const IngestOptions& o) {
  IngestConfig cfg;
  cfg.path = o.input;
  cfg.has_header = o.header;
  cfg.orientation = o.columns ? Orientation::ReplicatesAsColumns : Orientation::ReplicatesAsRows;
  cfg.standardize = o.standardize;
  cfg.mirror = o.mirror;
  return load_ensemble_csv(cfg);
}

void add_ingest_meta(json& meta, const IngestOptions& o, const ReplicateEnsemble& e) {
  meta["input"] = o.input;
  meta["standardized"] = e.standardized;
  meta["replicates"] = e.replicates;
  meta["length"] = e.length;
  meta["original_replicates"] = e.original_replicates;
  if (e.original_replicates != e.replicates) {
    meta["mirrored_range"] = {e.original_replicates, e.replicates};
  }
}

struct SimulateOptions {
  std::string spec = "sim_main";
  std::string coherence = "none";
  std::size_t R = 256;
  std::size_t T = 256;
  double sigma2 = 1.0;
};

int run_simulate(const CommonOptions& o, const SimulateOptions& s) {
  const SpectrumSpec spec = builtin_spectrum(s.spec, s.sigma2);
  const WaveletFamily fam = resolve_family(o, spec.default_family, spec.default_vanishing_moments);
  const CoherenceSpec coh = builtin_coherence(s.coherence, s.R, s.T);
  const ReplicateEnsemble e = simulate_ensemble(spec, coh, fam, s.R, s.T, o.seed);
  write_ensemble_csv(e, o.out + ".csv");
  json meta = sidecar("simulate", o, fam, dyadic_log2(s.T), o.M, o.MT,
                      o.truncate_negative.value_or(false), "");
  meta["spec"] = s.spec;
  meta["coherence"] = s.coherence;
  meta["sigma2"] = s.sigma2;
  meta["R"] = s.R;
  meta["T"] = s.T;
  meta["output_digest"] = file_digest(o.out + ".csv");
  write_sidecar(o.out, meta);
  return 0;
}

struct EstimateOptions {
  bool lsw = false;
};

int run_estimate(const CommonOptions& o, const IngestOptions& in, const EstimateOptions& eo) {
  const ReplicateEnsemble e = ingest(in);
  const WaveletFamily fam = resolve_family(o, FamilyId::DaubechiesLeastAsymmetric, 6);
  SmoothingConfig cfg;
  cfg.M = o.M >= 0 ? o.M : SmoothingConfig::rule_of_thumb_M(e.replicates);
  cfg.MT = o.MT >= 0 ? o.MT : 0;
  cfg.alpha = o.alpha;
  cfg.truncate_negative = o.truncate_negative.value_or(false);
  cfg.validate(e.replicates, e.length);
  const int J = cfg.resolve_J(e.length);
  const Basis basis = make_basis(fam, J);
  SpectralEstimate est;
  if (eo.lsw) {
    if (o.MT < 0) cfg.MT = SmoothingConfig::default_MT(e.length);
    est = estimate_lsw_average(transform_ensemble(e, basis.wavelets), basis, cfg);
  } else {
    est = estimate_rews(e, basis, cfg);
  }
  write_file(o.out + ".csv", spectral_to_csv(est));
  write_file(o.out + ".json", spectral_to_json(est));
  json meta = sidecar("estimate", o, fam, J, cfg.M, cfg.MT, cfg.truncate_negative,
                      file_digest(in.input));
  add_ingest_meta(meta, in, e);
  meta["estimator"] = eo.lsw ? "LSW" : (cfg.MT > 0 ? "RLSW2" : "RLSW1");
  meta["valid_replicate_range"] = {est.valid_begin, est.valid_end};
  meta["clamp_fraction"] = est.clamp_fraction;
  write_sidecar(o.out, meta);
  return 0;
}

struct CoherenceOptions {
  int level = 1;
  std::size_t r = 0;
  std::optional<std::size_t> r_prime;
  std::optional<bool> clamp_to_unit;
  std::optional<bool> nonnegative_correction;
  double floor_epsilon = 1e-12;
};

int run_coherence(const CommonOptions& o, const IngestOptions& in, const CoherenceOptions& co) {
  const ReplicateEnsemble e = ingest(in);
  const WaveletFamily fam = resolve_family(o, FamilyId::DaubechiesLeastAsymmetric, 10);
  CoherencePipelineConfig cfg = CoherencePipelineConfig::defaults(parse_coherence_order(o.order));
  cfg.M = o.M >= 0 ? o.M : SmoothingConfig::rule_of_thumb_M(e.replicates);
  cfg.MT = o.MT >= 0 ? o.MT : 0;
  cfg.alpha = o.alpha;
  if (o.truncate_negative) cfg.truncate_negative = *o.truncate_negative;
  if (co.clamp_to_unit) cfg.clamp_to_unit = *co.clamp_to_unit;
  if (co.nonnegative_correction) cfg.nonnegative_correction = *co.nonnegative_correction;
  cfg.floor_epsilon = co.floor_epsilon;
  e.validate(true);
  cfg.validate(e.replicates, e.length);
  SmoothingConfig sc;
  sc.alpha = cfg.alpha;
  const int J = sc.resolve_J(e.length);
  const Basis basis = make_basis(fam, J);
  const CoefficientField coeffs = transform_ensemble(e, basis.wavelets);
  const CoherenceEngine engine(coeffs, basis.ipm, cfg);

  json meta = sidecar("coherence", o, fam, J, cfg.M, cfg.MT, cfg.truncate_negative,
                      file_digest(in.input));
  add_ingest_meta(meta, in, e);
  meta["level"] = co.level;
  meta["replicate"] = co.r;
  meta["clamp_to_unit"] = cfg.clamp_to_unit;
  meta["nonnegative_correction"] = cfg.nonnegative_correction;
  meta["floor_epsilon"] = cfg.floor_epsilon;
  if (co.r_prime) {
    const std::vector<double> series = coherence_pair_series(engine, co.level, co.r, *co.r_prime);
    std::string csv = "time_index,value\n";
    json values = json::array();
    for (std::size_t k = 0; k < series.size(); ++k) {
      csv += std::to_string(k) + ',' + format_double(series[k]) + '\n';
      values.push_back(std::isnan(series[k]) ? json(nullptr) : json(series[k]));
    }
    write_file(o.out + ".csv", csv);
    json doc{{"kind", "coherence_pair"},
             {"level", co.level},
             {"replicate", co.r},
             {"replicate_prime", *co.r_prime},
             {"values", std::move(values)}};
    write_file(o.out + ".json", doc.dump() + "\n");
    meta["replicate_prime"] = *co.r_prime;
  } else {
    const CoherenceSlice slice = estimate_coherence_slice(engine, co.level, co.r);
    write_file(o.out + ".csv", slice_to_csv(slice));
    write_file(o.out + ".json", slice_to_json(slice));
    meta["clamp_fraction"] = slice.clamp_fraction;
    meta["missing"] = slice.missing;
  }
  write_sidecar(o.out, meta);
  return 0;
}

struct BenchmarkOptions {
  std::string scenario = "sim_main";
  std::string coherence = "none";
  std::vector<std::size_t> Rs{256};
  std::vector<std::size_t> Ts{256};
  std::vector<int> Ms;
  std::size_t N = 100;
  std::vector<std::string> estimators;
  std::optional<bool> nonnegative_correction;
  bool quiet = false;
};

int run_benchmark(const CommonOptions& o, const BenchmarkOptions& b) {
  Scenario sc;
  sc.spectrum = b.scenario;
  sc.coherence = b.coherence;
  const SpectrumSpec spec = builtin_spectrum(b.scenario);
  const WaveletFamily fam = resolve_family(o, spec.default_family, spec.default_vanishing_moments);
  sc.family = fam;
  for (std::size_t R : b.Rs) {
    for (std::size_t T : b.Ts) sc.sizes.emplace_back(R, T);
  }
  sc.Ms = b.Ms;
  if (sc.Ms.empty()) sc.Ms.push_back(o.M >= 0 ? o.M : SmoothingConfig::rule_of_thumb_M(b.Rs.front()));
  if (!b.estimators.empty()) {
    sc.estimators.clear();
    for (const auto& s : b.estimators) sc.estimators.push_back(parse_estimator(s));
  } else if (b.coherence != "none") {
    sc.estimators = {Estimator::COH1, Estimator::COH2};
  }
  sc.MT = o.MT;
  sc.alpha = o.alpha;
  sc.truncate_negative = o.truncate_negative.value_or(false);
  sc.coherence_config = CoherencePipelineConfig::defaults(parse_coherence_order(o.order));
  if (o.truncate_negative) sc.coherence_config.truncate_negative = *o.truncate_negative;
  if (b.nonnegative_correction) {
    sc.coherence_config.nonnegative_correction = *b.nonnegative_correction;
  }
  sc.runs = b.N;
  sc.seed = o.seed;

  ProgressFn progress;
  if (!b.quiet) progress = [](const std::string& s) { std::cerr << s << '\n'; };
  const std::vector<MseReport> reports = benchmark_table(sc, progress);
  write_file(o.out + ".csv", reports_to_csv(reports));
  write_file(o.out + ".json", reports_to_json(reports));

  std::printf("%-6s %-6s %-4s %-4s %-8s %10s %12s\n", "R", "T", "M", "MT", "est", "mse*100",
              "bias2*100");
  for (const auto& r : reports) {
    std::printf("%-6zu %-6zu %-4d %-4d %-8s %10.2f %12.2f\n", r.R, r.T, r.M, r.MT,
                r.estimator.c_str(), 100.0 * r.mse, 100.0 * r.bias_sq);
    if (!b.quiet) std::fprintf(stderr, "  %s wall time %.1f s\n", r.estimator.c_str(), r.wall_time);
  }

  const int J = SmoothingConfig{0, 0, o.alpha, false}.resolve_J(b.Ts.front());
  json meta = sidecar("benchmark", o, fam, J, sc.Ms.front(), sc.MT, sc.truncate_negative, "");
  meta["scenario"] = b.scenario;
  meta["nonnegative_correction"] = sc.coherence_config.nonnegative_correction;
  meta["coherence"] = b.coherence;
  meta["R"] = b.Rs;
  meta["T"] = b.Ts;
  meta["M_values"] = sc.Ms;
  meta["N"] = b.N;
  std::vector<std::string> names;
  for (Estimator e : sc.estimators) names.emplace_back(to_string(e));
  meta["estimators"] = names;
  write_sidecar(o.out, meta);
  return 0;
}

struct BasisOptions {
  int J = 0;
  std::size_t T = 0;
};

int run_basis_dump(const CommonOptions& o, const BasisOptions& b) {
  const WaveletFamily fam = resolve_family(o, FamilyId::Haar, 1);
  int J = b.J;
  if (J <= 0) {
    if (b.T == 0) throw ConfigError("basis-dump needs --J or --T");
    J = SmoothingConfig{0, 0, o.alpha, false}.resolve_J(b.T);
  }
  const Basis basis = make_basis(fam, J);
  write_file(o.out + "_psi.csv", autocorrelations_to_csv(basis.autocorrelations));
  write_file(o.out + "_A.csv", matrix_to_csv(basis.ipm.A));
  write_file(o.out + "_Ainv.csv", matrix_to_csv(basis.ipm.A_inv));
  json meta = sidecar("basis-dump", o, fam, J, o.M, o.MT, o.truncate_negative.value_or(false), "");
  meta["condition_estimate"] = basis.ipm.condition_estimate;
  write_sidecar(o.out, meta);
  return 0;
}

}  // namespace

int cli_dispatch(int argc, char** argv) {
  CLI::App app{"Replicate locally stationary wavelet spectral estimation", "rlsw"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", RLSW_VERSION);

  CommonOptions common;
  IngestOptions ingest_opts;

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate an ensemble from a builtin design");
  add_common(simulate, common);
  simulate->add_option("--spec", sim.spec, "sim_main, sim1, sim2, white_noise, zero")
      ->capture_default_str();
  simulate->add_option("--coherence", sim.coherence, "none, constant07, block_9971_50")
      ->capture_default_str();
  simulate->add_option("--R", sim.R, "Replicates")->capture_default_str();
  simulate->add_option("--T", sim.T, "Series length (power of two)")->capture_default_str();
  simulate->add_option("--sigma2", sim.sigma2, "white_noise variance")->capture_default_str();

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the replicate wavelet spectrum");
  add_common(estimate, common);
  add_ingest(estimate, ingest_opts);
  estimate->add_flag("--lsw", est.lsw, "Classical baseline averaged over all replicates");

  CoherenceOptions coh;
  auto* coherence = app.add_subcommand("coherence", "Estimate replicate coherence");
  add_common(coherence, common);
  add_ingest(coherence, ingest_opts);
  coherence->add_option("--level", coh.level, "Scale j (1 = finest)")->required();
  coherence->add_option("--r", coh.r, "Reference replicate (0-based)")->required();
  coherence->add_option("--r-prime", coh.r_prime, "Second replicate; emits a pair series");
  coherence->add_option("--clamp-to-unit", coh.clamp_to_unit, "Clamp |rho| to 1 (true/false)");
  coherence->add_option("--nonnegative-correction", coh.nonnegative_correction,
                        "Zero the negative entries of A^-1 (true/false)");
  coherence->add_option("--floor-epsilon", coh.floor_epsilon, "Relative denominator floor")
      ->capture_default_str();

  BenchmarkOptions bench;
  auto* benchmark = app.add_subcommand("benchmark", "Monte-Carlo MSE and squared bias tables");
  add_common(benchmark, common);
  benchmark->add_option("--scenario", bench.scenario, "Builtin spectrum")->capture_default_str();
  benchmark->add_option("--coherence", bench.coherence, "Builtin coherence design")
      ->capture_default_str();
  benchmark->add_option("--R", bench.Rs, "Replicate counts")->capture_default_str()->delimiter(',');
  benchmark->add_option("--T", bench.Ts, "Series lengths")->capture_default_str()->delimiter(',');
  benchmark->add_option("--Ms", bench.Ms, "Several replicate half-windows")->delimiter(',');
  benchmark->add_option("--N", bench.N, "Runs per cell")->capture_default_str();
  benchmark->add_option("--estimators", bench.estimators, "LSW, RLSW1, RLSW2, COH1, COH2")->delimiter(',');
  benchmark->add_option("--nonnegative-correction", bench.nonnegative_correction,
                        "Coherence cells: zero the negative entries of A^-1 (true/false)");
  benchmark->add_flag("--quiet", bench.quiet, "No progress output");

  BasisOptions basis;
  auto* basis_dump = app.add_subcommand("basis-dump", "Write Psi_j, A and A^-1 as CSV");
  add_common(basis_dump, common);
  basis_dump->add_option("--J", basis.J, "Number of scales");
  basis_dump->add_option("--T", basis.T, "Series length (J = floor(alpha log2 T))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return run_simulate(common, sim);
    if (estimate->parsed()) return run_estimate(common, ingest_opts, est);
    if (coherence->parsed()) return run_coherence(common, ingest_opts, coh);
    if (benchmark->parsed()) {
      if (common.M >= 0 && bench.Ms.empty()) bench.Ms.push_back(common.M);
      return run_benchmark(common, bench);
    }
    if (basis_dump->parsed()) return run_basis_dump(common, basis);
  } catch (const Error& e) {
    std::cerr << "rlsw: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rlsw: unexpected error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace rlsw
