#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tvjko/certificate.hpp"
#include "tvjko/grid_density.hpp"
#include "tvjko/radial.hpp"
#include "tvjko/splitting.hpp"

namespace tvjko {

struct StepDiagnostics {
  int k = 0;
  double t = 0.0;
  double w2sq_step = 0.0;
  double tv = 0.0;
  double energy = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double max_abs_z = 0.0;
  double el_residual = 0.0;
  double complementarity = 0.0;
  double jump_alignment = 0.0;
  /// rho-weighted norm of (x - T) + tau z'' over interior support cells.
  double eulerk2_residual = 0.0;
  /// sum (z'')^2 dx over the same cells.
  double grad_div_z_l2 = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Piecewise-constant-in-time trajectory; entry k of `densities` is rho_k.
struct FlowTrajectory {
  double tau = 0.0;
  double horizon = 0.0;
  std::vector<GridDensity> densities;
  /// Entry 0 describes rho_0; entry k >= 1 the step producing rho_k.
  std::vector<StepDiagnostics> diagnostics;
  /// z'' per step (entry k - 1 belongs to rho_k), cell centered.
  std::vector<std::vector<double>> z_second_derivative;
  double sum_w2sq = 0.0;
  /// (1/2 tau) sum W2^2 + integral of ||z''||^2 dt, the H^1 proxy.
  double integrated_grad_div_z = 0.0;
  bool completed = false;
  std::string failure;

  int step_count() const { return static_cast<int>(densities.size()) - 1; }
};

/// Number of steps floor(T / tau), robust to rounding of T / tau.
int step_count_for(double tau, double horizon);

/// Runs JKO steps from rho0 up to the horizon; each step starts from the
/// previous density. Stops early (completed = false) if a step fails.
FlowTrajectory run_flow(const GridDensity& rho0, double tau, double horizon, const JkoConfig& config);

/// rho_{k+1} for t in (k tau, (k+1) tau], rho_0 at t = 0.
const GridDensity& interpolate(const FlowTrajectory& traj, double t);

/// Separable test function u(t, x) = a(t) b(x).
struct TestFunction {
  std::string name;
  std::function<double(double)> time;
  std::function<double(double)> time_primitive;
  std::function<double(double)> space;
  std::function<double(double)> space_derivative;
};

/// Ten polynomial bumps (1 - t/T)^3 (t/T)^p * (s (1 - s))^3 s^q, p < 2, q < 5.
std::vector<TestFunction> default_test_family(const GridSpec& grid, double horizon);

/// max over the family of |R_tau(u)| for
///   R_tau(u) = int int (u_t rho - rho z'' u_x) dx dt + int u(0, x) rho_1 dx.
/// Time integrals are exact; space uses the midpoint rule.
double weak_solution_residual(const FlowTrajectory& traj, const std::vector<TestFunction>& family);
double weak_solution_residual(const FlowTrajectory& traj);

/// Cell-centered z'' from interface values, differencing only inside the support.
std::vector<double> support_second_derivative(std::span<const double> rho, std::span<const double> z,
                                              double dx, double vacuum_relative = 1e-10);

/// Long form `k,t,x,rho`.
void write_trajectory_csv(const std::string& path, const FlowTrajectory& traj);
/// `k,t,w2sq_step,tv,energy,min_rho,max_rho,max_abs_z,el_residual,complementarity,eulerk2_residual`.
void write_diagnostics_csv(const std::string& path, const std::vector<StepDiagnostics>& diagnostics);

struct RadialTrajectory {
  double tau = 0.0;
  double horizon = 0.0;
  std::vector<RadialDensity> densities;
  std::vector<StepDiagnostics> diagnostics;
  double sum_w2sq = 0.0;
  bool completed = false;
  std::string failure;
};

RadialTrajectory run_radial_flow(const RadialDensity& rho0, double tau, double horizon, const JkoConfig& config);

/// Long form `k,t,r,rho`.
void write_radial_trajectory_csv(const std::string& path, const RadialTrajectory& traj);

}  // namespace tvjko
