#include "rlsw/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rlsw/error.hpp"

namespace rlsw {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return res.ec == std::errc() && res.ptr == cell.data() + cell.size();
}

// Rectangular numeric rows; blank lines and an optional header are skipped.
std::vector<std::vector<double>> parse_matrix(std::istream& in, bool has_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v)) {
        throw InputError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                         ": '" + std::string(cells[c]) + "' is not a number");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("line " + std::to_string(line_no) + " (row " + std::to_string(rows.size() + 1) +
                       ") has " + std::to_string(row.size()) + " values, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("no numeric rows found");
  return rows;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string file_digest(const std::string& path) { return fnv1a_hex(read_file(path)); }

ReplicateEnsemble parse_ensemble_csv(std::istream& in, const IngestConfig& cfg) {
  const auto rows = parse_matrix(in, cfg.has_header);
  ReplicateEnsemble e;
  const bool by_rows = cfg.orientation == Orientation::ReplicatesAsRows;
  e.replicates = by_rows ? rows.size() : rows.front().size();
  e.length = by_rows ? rows.front().size() : rows.size();
  e.data.resize(e.replicates * e.length);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows[a].size(); ++b) {
      if (by_rows) e.data[a * e.length + b] = rows[a][b];
      else e.data[b * e.length + a] = rows[a][b];
    }
  }
  e.original_replicates = e.replicates;
  e.source = cfg.path.empty() ? "stream" : cfg.path;
  e.validate(false);
  if (cfg.standardize) e = standardize_replicates(e);
  if (cfg.mirror) e = mirror_to_dyadic(e);
  return e;
}

ReplicateEnsemble load_ensemble_csv(const IngestConfig& cfg) {
  std::ifstream in(cfg.path);
  if (!in) throw InputError("cannot open '" + cfg.path + "'");
  try {
    return parse_ensemble_csv(in, cfg);
  } catch (const InputError& err) {
    throw InputError(cfg.path + ": " + err.what());
  }
}

void write_ensemble_csv(const ReplicateEnsemble& e, std::ostream& out) {
  for (std::size_t r = 0; r < e.replicates; ++r) {
    for (std::size_t t = 0; t < e.length; ++t) {
      if (t) out << ',';
      out << format_double(e.at(r, t));
    }
    out << '\n';
  }
}

void write_ensemble_csv(const ReplicateEnsemble& e, const std::string& path) {
  std::ostringstream ss;
  write_ensemble_csv(e, ss);
  write_file(path, ss.str());
}

ReplicateEnsemble standardize_replicates(const ReplicateEnsemble& e) {
  e.validate(false);
  ReplicateEnsemble out = e;
  const std::size_t T = e.length;
  for (std::size_t r = 0; r < e.replicates; ++r) {
    const double* x = e.row(r);
    double mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) mean += x[t];
    mean /= static_cast<double>(T);
    double ss = 0.0;
    for (std::size_t t = 0; t < T; ++t) ss += (x[t] - mean) * (x[t] - mean);
    const double var = ss / static_cast<double>(T - 1);
    if (!(var > 0.0)) {
      throw InputError("replicate " + std::to_string(r) + " is constant and cannot be standardised");
    }
    const double sd = std::sqrt(var);
    double* y = out.row(r);
    for (std::size_t t = 0; t < T; ++t) y[t] = (x[t] - mean) / sd;
  }
  out.standardized = true;
  return out;
}

ReplicateEnsemble mirror_to_dyadic(const ReplicateEnsemble& e) {
  const std::size_t R = e.replicates;
  if (R < 1) throw InputError("ensemble has no replicates");
  std::size_t P = 1;
  while (P < R) P <<= 1;
  ReplicateEnsemble out = e;
  if (P == R) return out;
  const std::size_t T = e.length;
  out.replicates = P;
  out.data.resize(P * T);
  for (std::size_t m = 0; m < P - R; ++m) {
    const std::size_t src = R - 2 - m;
    std::copy(e.row(src), e.row(src) + T, out.row(R + m));
  }
  out.original_replicates = e.original_replicates ? e.original_replicates : R;
  out.source = e.source + " (mirrored " + std::to_string(R) + ".." + std::to_string(P - 1) + ")";
  return out;
}

std::string spectral_to_csv(const SpectralEstimate& est) {
  std::string s = "scale,time_index,replicate,value\n";
  s.reserve(est.values.size() * 32);
  for (int j = 1; j <= est.J; ++j) {
    for (std::size_t k = 0; k < est.T; ++k) {
      for (std::size_t r = 0; r < est.R; ++r) {
        s += std::to_string(j);
        s += ',';
        s += std::to_string(k);
        s += ',';
        s += std::to_string(r);
        s += ',';
        s += format_double(est(j, k, r));
        s += '\n';
      }
    }
  }
  return s;
}

SpectralEstimate spectral_from_csv(const std::string& text) {
  std::istringstream in(text);
  const auto rows = parse_matrix(in, true);
  if (rows.front().size() != 4) throw InputError("spectral CSV needs 4 columns");
  int J = 0;
  std::size_t T = 0, R = 0;
  for (const auto& row : rows) {
    J = std::max(J, static_cast<int>(row[0]));
    T = std::max(T, static_cast<std::size_t>(row[1]) + 1);
    R = std::max(R, static_cast<std::size_t>(row[2]) + 1);
  }
  SpectralEstimate est(J, T, R);
  if (rows.size() != est.values.size()) throw InputError("spectral CSV does not cover the full grid");
  for (const auto& row : rows) {
    est(static_cast<int>(row[0]), static_cast<std::size_t>(row[1]), static_cast<std::size_t>(row[2])) =
        row[3];
  }
  est.valid_end = R;
  return est;
}

namespace {

json config_json(const SmoothingConfig& c) {
  return json{{"M", c.M}, {"MT", c.MT}, {"alpha", c.alpha}, {"truncate_negative", c.truncate_negative}};
}

}  // namespace

std::string spectral_to_json(const SpectralEstimate& est) {
  json values = json::array();
  for (int j = 1; j <= est.J; ++j) {
    json scale = json::array();
    for (std::size_t k = 0; k < est.T; ++k) {
      const double* p = est.values.data() + est.index(j, k, 0);
      scale.push_back(std::vector<double>(p, p + est.R));
    }
    values.push_back(std::move(scale));
  }
  json doc{{"kind", "spectral_estimate"},
           {"J", est.J},
           {"T", est.T},
           {"R", est.R},
           {"config", config_json(est.config)},
           {"valid_replicate_range", {est.valid_begin, est.valid_end}},
           {"clamp_fraction", est.clamp_fraction},
           {"values", std::move(values)}};
  return doc.dump() + "\n";
}

SpectralEstimate spectral_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& err) {
    throw InputError(std::string("invalid spectral JSON: ") + err.what());
  }
  try {
    SpectralEstimate est(doc.at("J").get<int>(), doc.at("T").get<std::size_t>(),
                         doc.at("R").get<std::size_t>());
    const json& c = doc.at("config");
    est.config.M = c.at("M").get<int>();
    est.config.MT = c.at("MT").get<int>();
    est.config.alpha = c.at("alpha").get<double>();
    est.config.truncate_negative = c.at("truncate_negative").get<bool>();
    est.valid_begin = doc.at("valid_replicate_range").at(0).get<std::size_t>();
    est.valid_end = doc.at("valid_replicate_range").at(1).get<std::size_t>();
    est.clamp_fraction = doc.at("clamp_fraction").get<double>();
    const json& v = doc.at("values");
    for (int j = 1; j <= est.J; ++j) {
      for (std::size_t k = 0; k < est.T; ++k) {
        const json& row = v.at(static_cast<std::size_t>(j - 1)).at(k);
        if (row.size() != est.R) throw InputError("spectral JSON row has the wrong length");
        for (std::size_t r = 0; r < est.R; ++r) est(j, k, r) = row[r].get<double>();
      }
    }
    return est;
  } catch (const json::exception& err) {
    throw InputError(std::string("malformed spectral JSON: ") + err.what());
  }
}

std::string slice_to_csv(const CoherenceSlice& s) {
  std::string out = "time_index,replicate_prime,value\n";
  for (std::size_t k = 0; k < s.T; ++k) {
    for (std::size_t rp = 0; rp < s.R; ++rp) {
      out += std::to_string(k) + ',' + std::to_string(rp) + ',' + format_double(s(k, rp)) + '\n';
    }
  }
  return out;
}

std::string slice_to_json(const CoherenceSlice& s) {
  json values = json::array();
  for (std::size_t k = 0; k < s.T; ++k) {
    json row = json::array();
    for (std::size_t rp = 0; rp < s.R; ++rp) {
      const double v = s(k, rp);
      row.push_back(std::isnan(v) ? json(nullptr) : json(v));
    }
    values.push_back(std::move(row));
  }
  json doc{{"kind", "coherence_slice"},
           {"level", s.j},
           {"replicate", s.r},
           {"T", s.T},
           {"R", s.R},
           {"config",
            {{"M", s.config.M},
             {"MT", s.config.MT},
             {"alpha", s.config.alpha},
             {"order", to_string(s.config.order)},
             {"truncate_negative", s.config.truncate_negative},
             {"nonnegative_correction", s.config.nonnegative_correction},
             {"clamp_to_unit", s.config.clamp_to_unit},
             {"floor_epsilon", s.config.floor_epsilon}}},
           {"clamp_fraction", s.clamp_fraction},
           {"missing", s.missing},
           {"values", std::move(values)}};
  return doc.dump() + "\n";
}

namespace {

std::string x100(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

}  // namespace

std::string reports_to_csv(const std::vector<MseReport>& reports) {
  std::string out = "scenario,R,T,M,MT,estimator,mse_x100,bias_sq_x100,mse,bias_sq,N,missing_values\n";
  for (const auto& r : reports) {
    out += r.scenario + ',' + std::to_string(r.R) + ',' + std::to_string(r.T) + ',' +
           std::to_string(r.M) + ',' + std::to_string(r.MT) + ',' + r.estimator + ',' + x100(r.mse) +
           ',' + x100(r.bias_sq) + ',' + format_double(r.mse) + ',' + format_double(r.bias_sq) +
           ',' + std::to_string(r.N) + ',' + std::to_string(r.missing_values) + '\n';
  }
  return out;
}

std::string reports_to_json(const std::vector<MseReport>& reports) {
  json rows = json::array();
  for (const auto& r : reports) {
    rows.push_back({{"scenario", r.scenario},
                    {"estimator", r.estimator},
                    {"R", r.R},
                    {"T", r.T},
                    {"M", r.M},
                    {"MT", r.MT},
                    {"mse", r.mse},
                    {"bias_sq", r.bias_sq},
                    {"N", r.N},
                    {"missing_values", r.missing_values}});
  }
  return json{{"kind", "benchmark"}, {"rows", std::move(rows)}}.dump(2) + "\n";
}

std::string autocorrelations_to_csv(const AutocorrelationSet& acs) {
  long max_lag = 0;
  for (const auto& p : acs.Psi) max_lag = std::max(max_lag, p.max_lag());
  std::string out = "lag";
  for (std::size_t j = 1; j <= acs.Psi.size(); ++j) out += ",Psi_" + std::to_string(j);
  out += '\n';
  for (long tau = -max_lag; tau <= max_lag; ++tau) {
    out += std::to_string(tau);
    for (const auto& p : acs.Psi) out += ',' + format_double(p(tau));
    out += '\n';
  }
  return out;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out = "row";
  for (Eigen::Index c = 0; c < m.cols(); ++c) out += ',' + std::to_string(c + 1);
  out += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += std::to_string(r + 1);
    for (Eigen::Index c = 0; c < m.cols(); ++c) out += ',' + format_double(m(r, c));
    out += '\n';
  }
  return out;
}

}  // namespace rlsw
