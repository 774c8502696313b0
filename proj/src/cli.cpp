#include "tvjko/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "tvjko/analytic_reference.hpp"
#include "tvjko/certificate.hpp"
#include "tvjko/csv_io.hpp"
#include "tvjko/flow_driver.hpp"
#include "tvjko/jko_solver.hpp"
#include "tvjko/oracles.hpp"
#include "tvjko/radial.hpp"
#include "tvjko/transport1d.hpp"

namespace tvjko {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Context {
  const RunConfig& config;
  fs::path dir;
  RunOutcome outcome;

  std::string path(const std::string& name) {
    outcome.files.push_back(name);
    return (dir / name).string();
  }
  void fail(int code, const std::string& kind, const std::string& message) {
    if (outcome.exit_code != kExitOk) return;
    outcome.exit_code = code;
    outcome.error_kind = kind;
    outcome.message = message;
  }
};

json certificate_summary(const DualCertificate& c) {
  return {{"residual_el", c.residual_el},
          {"max_abs_z", c.max_abs_z},
          {"complementarity", c.complementarity},
          {"jump_alignment", c.jump_alignment}};
}

// One row per compared quantity: `quantity,observed,expected,deviation,tolerance,verdict`.
struct ValidationTable {
  std::vector<std::tuple<std::string, double, double, double>> rows;
  bool all_passed = true;

  void add(const std::string& name, double observed, double expected, double tolerance) {
    rows.emplace_back(name, observed, expected, tolerance);
    if (!(std::abs(observed - expected) <= tolerance)) all_passed = false;
  }
  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << std::setprecision(17) << "quantity,observed,expected,deviation,tolerance,verdict\n";
    for (const auto& [name, obs, exp, tol] : rows) {
      const double dev = std::abs(obs - exp);
      out << name << ',' << obs << ',' << exp << ',' << dev << ',' << tol << ',' << (dev <= tol ? "pass" : "fail")
          << '\n';
    }
  }
  json to_json() const {
    json j = json::array();
    for (const auto& [name, obs, exp, tol] : rows) {
      j.push_back({{"quantity", name}, {"observed", obs}, {"expected", exp}, {"tolerance", tol},
                   {"passed", std::abs(obs - exp) <= tol}});
    }
    return j;
  }
};

GridDensity read_checked_density(const RunConfig& c) {
  GridDensity rho = read_density_csv(c.io.input_path);
  if (c.grid && !(c.grid->spec() == rho.grid())) {
    throw std::invalid_argument("config: 'grid' does not match the grid of " + c.io.input_path);
  }
  return rho;
}

RadialDensity read_checked_radial(const RunConfig& c) {
  RadialDensity rho = read_radial_csv(c.io.input_path, c.radial->dimension);
  if (c.radial->radius && std::abs(*c.radial->radius - rho.radius()) > 1e-9 * rho.radius()) {
    throw std::invalid_argument("config: 'radial.radius' does not match " + c.io.input_path);
  }
  return rho;
}

void write_step_outputs(Context& ctx, const JkoStepResult& r) {
  const auto& grid = r.rho1.grid();
  write_density_csv(ctx.path("rho1.csv"), r.rho1);
  write_transport_csv(ctx.path("transport.csv"), grid, r.transport);
  write_certificate_csv(ctx.path("certificate_z.csv"), ctx.path("certificate_cells.csv"), grid, r.certificate);
}

json step_summary(const JkoStepResult& r) {
  return {{"energy", r.energy},
          {"w2_squared", r.w2_squared},
          {"total_variation", r.total_variation},
          {"entropy", r.entropy},
          {"iterations", r.iterations_used},
          {"converged", r.converged},
          {"min_rho", r.rho1.min_value()},
          {"max_rho", r.rho1.max_value()},
          {"certificate", certificate_summary(r.certificate)}};
}

void run_step(Context& ctx) {
  const auto rho0 = read_checked_density(ctx.config);
  const auto r = jko_step(rho0, ctx.config.jko());
  write_step_outputs(ctx, r);
  ctx.outcome.summary = step_summary(r);
  if (!r.converged) ctx.fail(kExitNotConverged, "nonconvergence", "certificate residual above tolerance after the iteration cap");
}

void run_flow_mode(Context& ctx) {
  const auto rho0 = read_checked_density(ctx.config);
  const auto traj = run_flow(rho0, *ctx.config.tau, *ctx.config.horizon, ctx.config.jko());
  write_trajectory_csv(ctx.path("trajectory.csv"), traj);
  write_diagnostics_csv(ctx.path("diagnostics.csv"), traj.diagnostics);
  double sup_tv = 0.0;
  for (const auto& d : traj.diagnostics) sup_tv = std::max(sup_tv, d.tv);
  json s = {{"steps_planned", step_count_for(*ctx.config.tau, *ctx.config.horizon)},
            {"steps_completed", traj.step_count()},
            {"completed", traj.completed},
            {"tv_initial", total_variation(rho0)},
            {"tv_sup", sup_tv},
            {"dissipation", traj.sum_w2sq / (2.0 * traj.tau)},
            {"integrated_grad_div_z", traj.integrated_grad_div_z}};
  if (traj.completed) s["weak_residual"] = weak_solution_residual(traj);
  if (!traj.failure.empty()) s["failure"] = traj.failure;
  ctx.outcome.summary = s;
  if (!traj.completed) ctx.fail(kExitNotConverged, "nonconvergence", traj.failure);
}

void run_radial_step(Context& ctx) {
  const auto rho0 = read_checked_radial(ctx.config);
  const auto r = radial_jko_step(rho0, ctx.config.jko());
  write_radial_csv(ctx.path("rho1.csv"), r.rho1);
  json s = {{"energy", r.energy},
            {"w2_squared", r.w2_squared},
            {"weighted_tv", r.weighted_tv},
            {"iterations", r.iterations_used},
            {"converged", r.converged},
            {"flux_lipschitz", r.flux_lipschitz},
            {"min_rho", r.rho1.min_value()},
            {"max_rho", r.rho1.max_value()},
            {"certificate", certificate_summary(r.certificate)}};
  const auto report = radial_min_principle_check(rho0, r.rho1, rho0.min_value(), ctx.config.solver.el_tolerance);
  s["min_principle"] = {{"precondition_met", report.precondition_met},
                        {"passed", report.passed},
                        {"margin", report.margin},
                        {"note", report.note}};
  ctx.outcome.summary = s;
  if (!r.converged) ctx.fail(kExitNotConverged, "nonconvergence", "certificate residual above tolerance after the iteration cap");
}

void run_radial_flow_mode(Context& ctx) {
  const auto rho0 = read_checked_radial(ctx.config);
  const auto traj = run_radial_flow(rho0, *ctx.config.tau, *ctx.config.horizon, ctx.config.jko());
  write_radial_trajectory_csv(ctx.path("trajectory.csv"), traj);
  write_diagnostics_csv(ctx.path("diagnostics.csv"), traj.diagnostics);
  json s = {{"steps_completed", static_cast<int>(traj.densities.size()) - 1},
            {"completed", traj.completed},
            {"weighted_tv_initial", weighted_total_variation(rho0)},
            {"dissipation", traj.sum_w2sq / (2.0 * traj.tau)}};
  if (!traj.failure.empty()) s["failure"] = traj.failure;
  ctx.outcome.summary = s;
  if (!traj.completed) ctx.fail(kExitNotConverged, "nonconvergence", traj.failure);
}

void run_validate_uniform(Context& ctx) {
  const auto& c = ctx.config;
  const GridSpec grid = c.grid->spec();
  const auto pair = analytic_profiles(UniformProfile{c.alpha0, *c.tau}, grid);
  const auto r = jko_step(pair.rho0, c.jko());
  write_step_outputs(ctx, r);
  ValidationTable t;
  t.add("l1_error", l1_distance(r.rho1, pair.rho1), 0.0, 3.0 * grid.dx());
  t.add("half_width", box_half_width(r.rho1), pair.jump_location, 2.0 * grid.dx());
  t.write(ctx.path("validation.csv"));
  ctx.outcome.summary = step_summary(r);
  ctx.outcome.summary["alpha1_exact"] = pair.jump_location;
  ctx.outcome.summary["checks"] = t.to_json();
  if (!r.converged) ctx.fail(kExitNotConverged, "nonconvergence", "certificate residual above tolerance after the iteration cap");
  if (!t.all_passed) ctx.fail(kExitValidationFailed, "validation", "solver output differs from the box solution");
}

// Jump interfaces of the plateau profile: largest up-jump on the left half
// and largest down-jump on the right half.
std::pair<std::size_t, std::size_t> plateau_jumps(const GridDensity& rho) {
  const std::size_t n = rho.size();
  std::size_t up = 1, down = n - 1;
  double best_up = -1.0, best_down = -1.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double d = rho[j] - rho[j - 1];
    if (rho.grid().interface(j) < 0.0 && d > best_up) {
      best_up = d;
      up = j;
    }
    if (rho.grid().interface(j) > 0.0 && -d > best_down) {
      best_down = -d;
      down = j;
    }
  }
  return {up, down};
}

void run_validate_hat(Context& ctx) {
  const auto& c = ctx.config;
  const GridSpec grid = c.grid->spec();
  const auto pair = analytic_profiles(HatProfile{*c.tau}, grid);
  const auto r = jko_step(pair.rho0, c.jko());
  write_step_outputs(ctx, r);
  const double beta = pair.jump_location;
  const double dx = grid.dx();
  // Plateau level: mean over cells well inside |x| < beta.
  double sum = 0.0, lo = 1e300, hi = -1e300;
  int count = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.center(i)) < beta - 2.0 * dx) {
      sum += r.rho1[i];
      lo = std::min(lo, r.rho1[i]);
      hi = std::max(hi, r.rho1[i]);
      ++count;
    }
  }
  const double h = pair.plateau_height;
  const auto [up, down] = plateau_jumps(r.rho1);
  ValidationTable t;
  t.add("plateau_mean", count ? sum / count : 0.0, h, 0.02 * h);
  t.add("plateau_min", lo, h, 0.02 * h);
  t.add("plateau_max", hi, h, 0.02 * h);
  t.add("left_jump", grid.interface(up), -beta, 2.0 * dx);
  t.add("right_jump", grid.interface(down), beta, 2.0 * dx);
  t.add("z_left_jump", r.certificate.z_values[up], -1.0, 1e-2);
  t.add("z_right_jump", r.certificate.z_values[down], 1.0, 1e-2);
  t.write(ctx.path("validation.csv"));
  ctx.outcome.summary = step_summary(r);
  ctx.outcome.summary["beta"] = beta;
  ctx.outcome.summary["checks"] = t.to_json();
  if (!r.converged) ctx.fail(kExitNotConverged, "nonconvergence", "certificate residual above tolerance after the iteration cap");
  if (!t.all_passed) ctx.fail(kExitValidationFailed, "validation", "solver output differs from the plateau solution");
}

void run_oracles(Context& ctx) {
  const auto results = oracles::run_oracle_checks(ctx.config.seed, ctx.config.oracle);
  std::ofstream out(ctx.path("oracle_report.csv"));
  if (!out) throw std::invalid_argument("cannot write oracle_report.csv");
  out << std::setprecision(17) << "oracle,instances,max_deviation,tolerance,verdict\n";
  json s = json::array();
  bool ok = true;
  for (const auto& o : results) {
    out << o.name << ',' << o.instances << ',' << o.max_deviation << ',' << o.tolerance << ','
        << (o.passed ? "pass" : "fail") << '\n';
    s.push_back({{"oracle", o.name}, {"instances", o.instances}, {"max_deviation", o.max_deviation},
                 {"tolerance", o.tolerance}, {"passed", o.passed}});
    ok = ok && o.passed;
  }
  ctx.outcome.summary = {{"oracles", s}};
  if (!ok) ctx.fail(kExitValidationFailed, "validation", "an oracle deviates beyond its tolerance");
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::invalid_argument("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".tvjko_write_probe";
  {
    std::ofstream p(probe);
    if (!p) throw std::invalid_argument("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

int report_error(int code, const std::string& kind, const std::string& message) {
  std::cerr << "tvjko: error kind=" << kind << " code=" << code << " message=\"" << one_line(message) << "\"\n";
  return code;
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  Context ctx{config, fs::path(config.io.output_dir), {}};
  prepare_output_dir(ctx.dir);
  switch (config.mode) {
    case RunMode::step: run_step(ctx); break;
    case RunMode::flow: run_flow_mode(ctx); break;
    case RunMode::radial_step: run_radial_step(ctx); break;
    case RunMode::radial_flow: run_radial_flow_mode(ctx); break;
    case RunMode::validate_uniform: run_validate_uniform(ctx); break;
    case RunMode::validate_hat: run_validate_hat(ctx); break;
    case RunMode::oracle_check: run_oracles(ctx); break;
  }
  json manifest = {{"tool", "tvjko"},
                   {"version", kVersion},
                   {"config", to_json(config)},
                   {"summary", ctx.outcome.summary},
                   {"files", ctx.outcome.files},
                   {"exit_code", ctx.outcome.exit_code}};
  ctx.outcome.files.push_back("manifest.json");
  std::ofstream out(ctx.dir / "manifest.json");
  if (!out) throw std::invalid_argument("cannot write manifest.json");
  out << manifest.dump(2) << '\n';
  return ctx.outcome;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"TV-regularized Wasserstein gradient flow solver"};
  std::string mode;
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("mode", mode, "step, flow, radial_step, radial_flow, validate_uniform, validate_hat, oracle_check")
      ->required();
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--override", overrides, "dotted.key=value applied on top of the config file");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kExitInputError, "input", e.what());
  }

  RunConfig config;
  try {
    const char* env = std::getenv("TVJKO_OUTPUT_DIR");
    config = load_run_config(config_path, mode, overrides,
                             env ? std::optional<std::string>(env) : std::nullopt);
  } catch (const std::exception& e) {
    return report_error(kExitInputError, "input", e.what());
  }
  try {
    const RunOutcome outcome = run(config);
    std::cout << "mode " << to_string(config.mode) << ": wrote " << outcome.files.size() << " files to "
              << config.io.output_dir << '\n';
    if (outcome.exit_code != kExitOk) return report_error(outcome.exit_code, outcome.error_kind, outcome.message);
    return kExitOk;
  } catch (const std::exception& e) {
    // Unreadable inputs and unwritable outputs both land here.
    return report_error(kExitInputError, "input", e.what());
  }
}

}  // namespace tvjko
