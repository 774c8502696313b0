#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvjko/grid_density.hpp"
#include "tvjko/oracles.hpp"
#include "tvjko/splitting.hpp"

namespace tvjko {

enum class RunMode { step, flow, radial_step, radial_flow, validate_uniform, validate_hat, oracle_check };

std::string to_string(RunMode mode);
/// Throws std::invalid_argument on unknown names.
RunMode parse_mode(const std::string& name);

struct GridConfig {
  double left = -4.0;
  double right = 4.0;
  std::size_t n_cells = 1024;

  GridSpec spec() const { return GridSpec(left, right, n_cells); }
};

struct SolverConfig {
  int max_outer_iter = 20000;
  double el_tolerance = 1e-6;
  /// "backtracking" or "fixed".
  std::string step_rule = "backtracking";
  /// Initial or constant step; 0 selects tau.
  double sigma = 0.0;
  bool accelerate = true;
  double min_density_floor = 0.0;
};

struct IoConfig {
  std::string input_path;
  std::string output_dir;
};

struct RadialConfig {
  int dimension = 2;
  /// Optional check against the radius read from the input file.
  std::optional<double> radius;
};

struct RunConfig {
  RunMode mode = RunMode::step;
  std::optional<GridConfig> grid;
  std::optional<double> tau;
  std::optional<double> horizon;
  double entropy_h = 0.0;
  SolverConfig solver;
  IoConfig io;
  std::optional<RadialConfig> radial;
  std::uint64_t seed = 1;
  /// Initial half-width for validate_uniform.
  double alpha0 = 1.0;
  oracles::OracleTolerances oracle;

  /// Fills mode defaults (grids and steps of the reference examples) and
  /// resolves the output directory.
  void resolve_defaults(const std::optional<std::string>& env_output_dir);
  /// Throws std::invalid_argument naming the first inconsistent field.
  void validate() const;
  JkoConfig jko() const;
};

/// Parses a config object; unknown keys are rejected with their dotted path.
RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

/// Applies `dotted.key=value` to a JSON object. The value is parsed as JSON
/// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Reads the file, applies overrides and the command-line mode, parses,
/// resolves defaults and validates.
RunConfig load_run_config(const std::string& path, const std::optional<std::string>& mode,
                          const std::vector<std::string>& overrides,
                          const std::optional<std::string>& env_output_dir);

}  // namespace tvjko
