#include "tvjko/jko_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvjko {

namespace {

SplittingProblem plain_problem(const GridDensity& rho0, double tau, double h) {
  const auto& grid = rho0.grid();
  SplittingProblem p{grid, std::vector<double>(rho0.values().begin(), rho0.values().end()),
                     std::vector<double>(grid.size(), 1.0), std::vector<double>(grid.size() - 1, 1.0),
                     tau, h};
  return p;
}

}  // namespace

double jko_energy(const GridDensity& rho0, const GridDensity& rho, double tau, double entropy_h) {
  if (!(rho.grid() == rho0.grid())) throw std::invalid_argument("jko_energy: grid mismatch");
  const auto p = plain_problem(rho0, tau, entropy_h);
  return evaluate_energy(p, std::vector<double>(rho.values().begin(), rho.values().end())).total;
}

JkoStepResult jko_step(const GridDensity& rho0, const JkoConfig& config,
                       const std::optional<GridDensity>& initial_guess) {
  config.validate();
  if (initial_guess && !(initial_guess->grid() == rho0.grid())) {
    throw std::invalid_argument("jko_step: initial guess lives on another grid");
  }
  const auto p = plain_problem(rho0, config.tau, config.entropy_h);
  const auto& start = initial_guess ? *initial_guess : rho0;
  auto sol = solve_splitting(p, std::vector<double>(start.values().begin(), start.values().end()), config);

  GridDensity rho1(rho0.grid(), std::move(sol.x));
  auto transport = compute_transport(rho1, rho0);
  const double ent = entropy(rho1);
  return JkoStepResult{std::move(rho1),
                       std::move(transport),
                       sol.energy.total,
                       ent,
                       sol.energy.w2_squared,
                       sol.energy.total_variation,
                       std::move(sol.certificate),
                       sol.iterations,
                       sol.converged,
                       std::move(sol.energy_trace)};
}

std::vector<EntropicResult> entropic_step_family(const GridDensity& rho0, double tau,
                                                 const std::vector<double>& h_values,
                                                 const JkoConfig& base) {
  for (std::size_t k = 0; k < h_values.size(); ++k) {
    if (!(h_values[k] > 0.0)) throw std::invalid_argument("entropic_step_family: h must be positive");
    if (k > 0 && !(h_values[k] < h_values[k - 1])) {
      throw std::invalid_argument("entropic_step_family: h values must be strictly decreasing");
    }
  }
  JkoConfig probe = base;
  probe.tau = tau;
  probe.entropy_h = h_values.empty() ? 0.0 : h_values.front();
  probe.validate();
  std::vector<std::optional<EntropicResult>> slots(h_values.size());
  const long count = static_cast<long>(h_values.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    JkoConfig cfg = base;
    cfg.tau = tau;
    cfg.entropy_h = h_values[k];
    auto step = jko_step(rho0, cfg);
    double lowest = std::numeric_limits<double>::infinity();
    for (double v : step.rho1.values()) {
      lowest = std::min(lowest, v > 0.0 ? h_values[k] * std::log(v) : -std::numeric_limits<double>::infinity());
    }
    slots[k] = EntropicResult{h_values[k], std::move(step), lowest};
  }
  std::vector<EntropicResult> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace tvjko
