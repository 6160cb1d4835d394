#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ite/spectra.hpp"

// Run outputs: ites.csv, counting.csv, events.csv and summary.json, written
// atomically with 17 significant digits. Timings go to a separate
// timings.json so the other files stay byte-identical across runs.
namespace ite {

const char* version();

/// "%.17g"; round-trips every finite double.
std::string format_double(double v);

/// SHA-256 (hex) of the canonical dump of a JSON document; key order and
/// whitespace of the source do not matter.
std::string canonical_digest(const nlohmann::json& doc);

struct RunManifest {
  std::string medium_digest;
  std::string medium_name;
  std::string backend = "radial";
  double alpha = 0.0;
  double lambda_max = 0.0;
  int points_per_decade = 64;
  int mode_cutoff = 0;
  nlohmann::json tolerances = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();  ///< effective configuration
  std::string tool_version = version();
  std::vector<std::pair<std::string, double>> timings;  ///< seconds per phase

  nlohmann::json to_json() const;  ///< without timings
};

struct ReportBundle {
  const CountingReport* report = nullptr;
  const std::vector<IteRecord>* ites = nullptr;
  const std::vector<EigencurveEvent>* events = nullptr;
  RunManifest manifest;
  std::optional<WeylFit> weyl;
  std::optional<EstimateSummary> estimates;
  std::vector<std::string> warnings;
  nlohmann::json extra = nlohmann::json::object();  ///< merged into summary.json
};

std::string ites_csv(const std::vector<IteRecord>& ites);
std::string counting_csv(const CountingReport& report);
std::string events_csv(const std::vector<EigencurveEvent>& events);
std::string estimates_csv(const EstimateSummary& est);
nlohmann::json summary_json(const ReportBundle& bundle);
nlohmann::json weyl_json(const WeylFit& fit);
nlohmann::json estimates_json(const EstimateSummary& est);

/// Writes every (file name, content) pair into out_dir via temporary files
/// and renames; on any failure nothing new is left behind. IoError names
/// the offending path.
void write_files(const std::string& out_dir, const std::map<std::string, std::string>& files);

/// Writes the four report files (plus estimates.csv when present) and
/// timings.json.
void write_report(const std::string& out_dir, const ReportBundle& bundle);

struct CountingSeries {
  std::vector<double> lambda, weyl_prediction, ratio;
  std::vector<long long> N_T, N, N_an, n_minus, n1, n2, R;
};

CountingSeries read_counting_csv(const std::string& path);

}  // namespace ite
