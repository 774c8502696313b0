#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tvjko/run_config.hpp"

namespace tvjko {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitNotConverged = 2,
  kExitValidationFailed = 3,
};

struct RunOutcome {
  int exit_code = kExitOk;
  /// "input", "nonconvergence" or "validation" when exit_code != 0.
  std::string error_kind;
  std::string message;
  nlohmann::json summary;
  /// Files written, relative to the output directory.
  std::vector<std::string> files;
};

/// Executes one validated configuration and writes its CSV files and
/// manifest.json into config.io.output_dir. Input errors propagate as
/// std::invalid_argument; numerical outcomes are reported in the result.
RunOutcome run(const RunConfig& config);

/// Entry point of the tvjko executable:
///   tvjko <mode> [--config path.json] [--override key=value ...]
/// Prints one `tvjko: error kind=<kind> code=<n> message="..."` line on
/// standard error for every nonzero exit.
int run_cli(int argc, char** argv);

}  // namespace tvjko
