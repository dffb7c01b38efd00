#ifndef GSLAB_RUNCONFIG_HPP
#define GSLAB_RUNCONFIG_HPP

#include <optional>
#include <string>

#include "gslab/study.hpp"

namespace gslab {

/// Raised on malformed configuration files (maps to exit status 2).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Acceptance bands checked after a run; all optional.
struct Bands {
  std::optional<std::pair<double, double>> order_l2;  ///< finest-level observed order
  std::optional<std::pair<double, double>> order_h1;
  std::optional<double> coercivity_ratio_max;  ///< max/min across levels
};

struct RunConfig {
  SchemeSpec scheme;
  std::string scheme_name;
  MeshFamily family;
  int levels = 2;
  std::string problem = "sin2d";
  double p = 2.0;
  std::uint64_t seed = 1;
  bool metrics = true;
  bool timings = false;
  int mc_samples = 10000;  ///< for the p != 2 lower bounds
  std::string out_csv = "study.csv";
  std::string out_metrics = "metrics.json";
  Bands bands;
};

RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

struct RunResult {
  bool bands_ok = true;
  std::string csv_path;
  std::string metrics_path;
  std::vector<StudyRow> rows;
};

/// Executes the configured study and writes the artifacts under out_dir
/// (write-then-rename; nothing is left half-written on failure).
RunResult run_config(const RunConfig& config, const std::string& out_dir);

/// One line per scheme kind.
std::string list_schemes_text();

}  // namespace gslab

#endif
