#pragma once

// Configuration-driven experiment runner: one deterministic solve per grid
// point, followed by seed-varied spectral clustering repetitions.
//
// Output layout:
//   <output_dir>/<grid_point_id>/{result.json, trace.csv, consensus.csv, plot.svg}
//   <output_dir>/summary.json

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvsc/data.hpp"
#include "mvsc/solver.hpp"

namespace mvsc::experiment {

struct ParameterPreset {
  std::string name;
  double alpha;
  double beta;
  double eta;
};

/// Per-corpus parameters reported for the seven benchmark data sets.
std::span<const ParameterPreset> parameter_presets();
/// Case-insensitive lookup; throws ConfigError for unknown names.
const ParameterPreset& find_preset(const std::string& name);

struct ParameterGrid {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> eta;
};

/// alpha, beta in {1e-5, ..., 10} (13 values), eta in {-5, -2, -1, 0.1, 0.5, 1.5, 2, 5}.
ParameterGrid default_grid();

struct ExperimentConfig {
  std::optional<std::filesystem::path> manifest;
  std::optional<SyntheticSpec> synthetic;
  Normalization normalization = Normalization::None;
  solver::SolverConfig solver;
  std::optional<ParameterGrid> grid;
  /// Defaults to the number of ground-truth classes.
  std::optional<int> k;
  int repetitions = 30;
  std::uint64_t seed = 0;
  solver::Variant variant = solver::Variant::Full;
  std::filesystem::path output_dir = "mvsc_out";
  int restarts = 20;
  int threads = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses the JSON form of ExperimentConfig. Relative paths are resolved
/// against base_dir. Field precedence: preset < explicit solver fields.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct GridPoint {
  double alpha;
  double beta;
  double eta;
};

/// Cartesian product of the grid axes, or the single solver point without a grid.
std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg);

/// Stable 16-hex-digit identifier of a grid point (FNV-1a over its parameters).
std::string grid_point_id(const GridPoint& p, const solver::SolverConfig& base,
                          solver::Variant variant);

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over repetitions
  std::vector<double> values;
};

struct GridPointResult {
  GridPoint point{};
  std::string id;
  bool ok = false;
  std::string error;
  bool converged = false;
  int iterations = 0;
  std::optional<MetricStats> acc, nmi, ari, f_score;
  nlohmann::json json;
};

struct ExperimentResult {
  std::vector<GridPointResult> points;
  nlohmann::json summary;
  /// 0 when at least one grid point succeeded, 2 when all failed.
  int exit_code = 0;
};

/// Builds the dataset described by the config (manifest or synthetic) and applies
/// the configured normalization.
MultiViewDataset prepare_dataset(const ExperimentConfig& cfg);

/// Runs every grid point and writes all artifacts. Solver failures are recorded
/// per point; the run continues.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Recomputes the best grid point per metric from per-point result JSONs.
nlohmann::json best_per_metric(const std::vector<nlohmann::json>& point_results);

}  // namespace mvsc::experiment
