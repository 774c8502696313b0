#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tvjko {

/// Slack for discrete maximum and minimum principles:
/// 10 el_tolerance + 2 max(rho0) dx.
double grid_slack(double el_tolerance, double max_rho0, double dx);

struct PropertyCaseResult {
  std::string name;
  std::uint64_t seed = 0;
  /// Distance to the bound, positive when the property holds.
  double margin = 0.0;
  double tolerance = 0.0;
  /// "pass", "fail" or "skip".
  std::string verdict;
  /// Property the case asserts.
  std::string anchor;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  double el_tolerance = 1e-6;
  /// Negative control: every solve stops after one iteration.
  bool inject_iteration_cap = false;
};

struct SuiteReport {
  std::vector<PropertyCaseResult> cases;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  bool ok() const { return failed == 0; }
};

/// Runs every registered case; independent solves run in parallel and the
/// report order is fixed.
SuiteReport run_suite(const SuiteOptions& options = {});

/// Writes `case,seed,margin,tolerance,verdict,anchor`.
void write_suite_csv(const std::string& path, const SuiteReport& report);

}  // namespace tvjko
