#include "tvjko/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tvjko/flow_driver.hpp"
#include "tvjko/jko_solver.hpp"
#include "tvjko/oracles.hpp"
#include "tvjko/radial.hpp"

namespace tvjko {

double grid_slack(double el_tolerance, double max_rho0, double dx) { return 10.0 * el_tolerance + 2.0 * max_rho0 * dx; }

namespace {

constexpr double kZSlack = 1e-4;
constexpr double kComplementarity = 1e-6;
constexpr double kResidual = 1e-6;
constexpr double kAlignment = 1e-3;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t family, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

PropertyCaseResult make_case(std::string name, std::uint64_t seed, double margin, double tolerance,
                             std::string anchor) {
  return {std::move(name), seed, margin, tolerance, margin >= 0.0 ? "pass" : "fail", std::move(anchor)};
}

PropertyCaseResult skipped_case(std::string name, std::uint64_t seed, std::string anchor) {
  return {std::move(name), seed, 0.0, 0.0, "skip", std::move(anchor)};
}

// Smallest slack of the four certificate conditions, each relative to its
// own tolerance; nonnegative iff all hold.
double certificate_margin(const DualCertificate& c) {
  return std::min({(1.0 + kZSlack - c.max_abs_z) / kZSlack, (kComplementarity - c.complementarity) / kComplementarity,
                   (kResidual - c.residual_el) / kResidual, (kAlignment - c.jump_alignment) / kAlignment});
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

struct StepJob {
  std::string label;
  std::uint64_t seed = 0;
  double tau = 0.0;
  double h = 0.0;
  bool positive = false;
  bool check_min = false;
};

struct RadialJob {
  std::string label;
  std::uint64_t seed = 0;
  int dimension = 2;
  double tau = 0.0;
};

struct FlowJob {
  std::uint64_t seed = 0;
};

// Profiles on [0, 1] with 256 cells; positive ones carry a background level.
GridDensity step_profile(std::uint64_t seed, bool positive) {
  std::mt19937_64 rng(seed);
  ProfileOptions opt;
  if (positive) opt.floor = 0.05 + 0.3 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return random_density(GridSpec(0.0, 1.0, 256), rng, opt);
}

RadialDensity radial_profile(std::uint64_t seed, int dimension) {
  std::mt19937_64 rng(seed);
  ProfileOptions opt;
  opt.floor = 0.1 + 0.3 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  opt.bumps = 2;
  const GridSpec grid(0.0, 1.0, 128);
  return RadialDensity::normalized(dimension, 1.0, grid.size(), random_profile_values(grid, rng, opt));
}

}  // namespace

SuiteReport run_suite(const SuiteOptions& options) {
  JkoConfig base;
  base.el_tolerance = options.el_tolerance;
  if (options.inject_iteration_cap) base.max_outer_iter = 1;
  const std::uint64_t s0 = options.seed;

  // One-dimensional steps: maximum principle on arbitrary profiles (with
  // and without entropy), minimum principle on strictly positive ones.
  std::vector<StepJob> steps;
  const double taus[] = {1e-1, 1e-2, 1e-3};
  for (int j = 0; j < 10; ++j) {
    for (double tau : taus) {
      for (double h : {0.0, 1e-2}) {
        // The entropic optimum is positive everywhere; a vacuum in rho0
        // would push it below double range, so those profiles get a floor.
        StepJob job{"max_principle/p" + std::to_string(j) + "/tau=" + fmt(tau) + "/h=" + fmt(h),
                    derive_seed(s0, 1, j), tau, h, h > 0.0, false};
        steps.push_back(job);
      }
    }
  }
  for (int j = 0; j < 10; ++j) {
    for (double tau : taus) {
      steps.push_back({"min_principle/p" + std::to_string(j) + "/tau=" + fmt(tau), derive_seed(s0, 2, j), tau, 0.0,
                       true, true});
    }
  }
  std::vector<RadialJob> radials;
  for (int d : {2, 3}) {
    for (int j = 0; j < 5; ++j) {
      for (double tau : taus) {
        radials.push_back({"radial_d" + std::to_string(d) + "/p" + std::to_string(j) + "/tau=" + fmt(tau),
                           derive_seed(s0, 3, 10 * d + j), d, tau});
      }
    }
  }
  std::vector<FlowJob> flows;
  for (int j = 0; j < 5; ++j) flows.push_back({derive_seed(s0, 4, j)});

  std::vector<std::optional<JkoStepResult>> step_out(steps.size());
  std::vector<std::optional<RadialStepResult>> radial_out(radials.size());
  std::vector<std::optional<FlowTrajectory>> flow_out(flows.size());
  const std::size_t total = steps.size() + radials.size() + flows.size();
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < total; ++k) {
    if (k < steps.size()) {
      const auto& job = steps[k];
      JkoConfig c = base;
      c.tau = job.tau;
      c.entropy_h = job.h;
      step_out[k] = jko_step(step_profile(job.seed, job.positive), c);
    } else if (k < steps.size() + radials.size()) {
      const auto& job = radials[k - steps.size()];
      JkoConfig c = base;
      c.tau = job.tau;
      radial_out[k - steps.size()] = radial_jko_step(radial_profile(job.seed, job.dimension), c);
    } else {
      const auto& job = flows[k - steps.size() - radials.size()];
      JkoConfig c = base;
      c.tau = 1e-2;
      flow_out[k - steps.size() - radials.size()] = run_flow(step_profile(job.seed, false), 1e-2, 0.1, c);
    }
  }

  SuiteReport report;
  auto& cases = report.cases;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& job = steps[k];
    const auto& r = *step_out[k];
    const auto rho0 = step_profile(job.seed, job.positive);
    const double eps = grid_slack(options.el_tolerance, rho0.max_value(), rho0.grid().dx());
    if (job.check_min) {
      cases.push_back(make_case(job.label, job.seed, r.rho1.min_value() - (rho0.min_value() - eps), eps,
                                "lower bound of a positive density is preserved by a step"));
    } else {
      cases.push_back(make_case(job.label, job.seed, rho0.max_value() + eps - r.rho1.max_value(), eps,
                                job.h > 0.0 ? "upper bound is preserved by an entropic step"
                                            : "upper bound is preserved by a step"));
    }
    cases.push_back(make_case("certificate/" + job.label, job.seed, certificate_margin(r.certificate), 1.0,
                              "optimality certificate: |z| <= 1, complementarity, residual, jump sign"));
    cases.push_back(make_case("energy_decrease/" + job.label, job.seed, jko_energy(rho0, rho0, job.tau, job.h) - r.energy,
                              0.0, "step energy does not exceed the energy of staying put"));
  }
  for (std::size_t k = 0; k < radials.size(); ++k) {
    const auto& job = radials[k];
    const auto& r = *radial_out[k];
    const auto rho0 = radial_profile(job.seed, job.dimension);
    const auto mp = radial_min_principle_check(rho0, r.rho1, rho0.min_value(), options.el_tolerance);
    cases.push_back(make_case("min_principle/" + job.label, job.seed, mp.margin, mp.eps_grid,
                              "lower bound of a positive radial density is preserved by a step"));
    cases.push_back(make_case("max_principle/" + job.label, job.seed,
                              rho0.max_value() + mp.eps_grid - r.rho1.max_value(), mp.eps_grid,
                              "upper bound is preserved by a radial step"));
    cases.push_back(make_case("certificate/" + job.label, job.seed, certificate_margin(r.certificate), 1.0,
                              "weighted optimality certificate"));
  }
  for (std::size_t k = 0; k < flows.size(); ++k) {
    const auto& traj = *flow_out[k];
    const std::uint64_t seed = flows[k].seed;
    const std::string label = "flow/p" + std::to_string(k);
    const double tv0 = total_variation(traj.densities.front());
    double sup_tv = 0.0;
    for (std::size_t i = 1; i < traj.densities.size(); ++i) sup_tv = std::max(sup_tv, total_variation(traj.densities[i]));
    if (!traj.completed) {
      cases.push_back({"dissipation/" + label, seed, -1.0, 0.0, "fail", "flow did not complete: " + traj.failure});
      continue;
    }
    cases.push_back(make_case("dissipation/" + label, seed, tv0 - traj.sum_w2sq / (2.0 * traj.tau), 0.0,
                              "dissipation (1/2tau) sum W2^2 is bounded by the initial total variation"));
    cases.push_back(make_case("tv_bound/" + label, seed, tv0 - sup_tv, 0.0,
                              "total variation never exceeds its initial value"));
  }

  // Guards: cases whose precondition fails are skipped, not failed.
  {
    const std::uint64_t seed = derive_seed(s0, 5, 0);
    const auto rho0 = step_profile(seed, false);
    const std::string anchor = "lower bound preservation needs min rho0 > 0";
    if (rho0.min_value() > 0.0) {
      cases.push_back({"min_principle/guard_1d", seed, -1.0, 0.0, "fail", "guard profile unexpectedly positive"});
    } else {
      cases.push_back(skipped_case("min_principle/guard_1d", seed, anchor));
    }
    std::vector<double> v(128);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 - static_cast<double>(i) / static_cast<double>(v.size() - 1);
    const auto radial0 = RadialDensity::normalized(2, 1.0, v.size(), v);
    JkoConfig c = base;
    c.tau = 1e-2;
    const auto r = radial_jko_step(radial0, c);
    const auto mp = radial_min_principle_check(radial0, r.rho1, radial0.min_value(), options.el_tolerance);
    if (mp.precondition_met) {
      cases.push_back({"min_principle/guard_radial", 0, -1.0, 0.0, "fail", "guard profile unexpectedly positive"});
    } else {
      cases.push_back(skipped_case("min_principle/guard_radial", 0, anchor + " (" + mp.note + ")"));
    }
  }

  for (const auto& c : cases) {
    if (c.verdict == "pass") ++report.passed;
    else if (c.verdict == "fail") ++report.failed;
    else ++report.skipped;
  }
  return report;
}

void write_suite_csv(const std::string& path, const SuiteReport& report) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << std::setprecision(10) << "case,seed,margin,tolerance,verdict,anchor\n";
  for (const auto& c : report.cases) {
    std::string anchor = c.anchor;
    std::replace(anchor.begin(), anchor.end(), ',', ';');
    out << c.name << ',' << c.seed << ',' << c.margin << ',' << c.tolerance << ',' << c.verdict << ",\"" << anchor
        << "\"\n";
  }
}

}  // namespace tvjko
