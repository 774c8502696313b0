// Runs the property suite and writes its report.
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tvjko/property_suite.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Property suite for the TV-JKO solver"};
  std::uint64_t seed = 1;
  std::string out = "properties.csv";
  bool inject = false;
  app.add_option("--seed", seed, "base seed for the random profiles");
  app.add_option("--out", out, "report path");
  app.add_flag("--inject-iteration-cap", inject, "negative control: stop every solve after one iteration");
  CLI11_PARSE(app, argc, argv);

  tvjko::SuiteOptions options;
  options.seed = seed;
  options.inject_iteration_cap = inject;
  const auto report = tvjko::run_suite(options);
  tvjko::write_suite_csv(out, report);
  for (const auto& c : report.cases) {
    if (c.verdict == "fail") std::cout << "FAIL " << c.name << " margin=" << c.margin << '\n';
  }
  std::cout << report.cases.size() << " cases: " << report.passed << " passed, " << report.failed << " failed, "
            << report.skipped << " skipped; report in " << out << '\n';
  return report.ok() ? 0 : 1;
}
