#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rlsw/coherence.hpp"
#include "rlsw/evaluation.hpp"
#include "rlsw/spectral.hpp"
#include "rlsw/transform.hpp"
#include "rlsw/wavelet.hpp"

namespace rlsw {

enum class Orientation { ReplicatesAsRows, ReplicatesAsColumns };

struct IngestConfig {
  std::string path;
  bool has_header = false;
  Orientation orientation = Orientation::ReplicatesAsRows;
  bool standardize = false;
  bool mirror = false;
};

/// Rectangular numeric CSV -> ensemble. Throws InputError naming the line
/// and column of the first bad cell or ragged row.
ReplicateEnsemble load_ensemble_csv(const IngestConfig& cfg);
ReplicateEnsemble parse_ensemble_csv(std::istream& in, const IngestConfig& cfg);

/// One replicate per row, 17 significant digits.
void write_ensemble_csv(const ReplicateEnsemble& e, std::ostream& out);
void write_ensemble_csv(const ReplicateEnsemble& e, const std::string& path);

/// Per replicate: subtract the mean, divide by the sample standard deviation
/// (divisor T - 1).
ReplicateEnsemble standardize_replicates(const ReplicateEnsemble& e);

/// Appends replicates R-2, R-3, ... (0-based) until R is a power of two.
ReplicateEnsemble mirror_to_dyadic(const ReplicateEnsemble& e);

/// Shortest decimal that round-trips ("%.17g").
std::string format_double(double v);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string file_digest(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Spectral estimates: long CSV (scale, time_index, replicate, value) and
// JSON with scale-major nested arrays plus a config block.
std::string spectral_to_csv(const SpectralEstimate& est);
SpectralEstimate spectral_from_csv(const std::string& text);
std::string spectral_to_json(const SpectralEstimate& est);
SpectralEstimate spectral_from_json(const std::string& text);

// Coherence slice: CSV (time_index, replicate_prime, value|NA) and JSON.
std::string slice_to_csv(const CoherenceSlice& s);
std::string slice_to_json(const CoherenceSlice& s);

// Benchmark tables: R, T, M, estimator, mse_x100, bias_sq_x100 plus full
// precision columns.
std::string reports_to_csv(const std::vector<MseReport>& reports);
std::string reports_to_json(const std::vector<MseReport>& reports);

// Basis dumps: Psi lag-major (lag, Psi_1..Psi_J); matrices row-major with a
// header row.
std::string autocorrelations_to_csv(const AutocorrelationSet& acs);
std::string matrix_to_csv(const Eigen::MatrixXd& m);

}  // namespace rlsw
