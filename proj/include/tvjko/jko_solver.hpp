#pragma once

#include <optional>
#include <vector>

#include "tvjko/certificate.hpp"
#include "tvjko/grid_density.hpp"
#include "tvjko/splitting.hpp"
#include "tvjko/transport1d.hpp"

namespace tvjko {

struct JkoStepResult {
  GridDensity rho1;
  TransportData transport;
  /// (1/2 tau) W2^2 + J_disc (+ h E when entropy_h > 0).
  double energy = 0.0;
  /// sum rho log rho dx, reported for every solve.
  double entropy = 0.0;
  double w2_squared = 0.0;
  double total_variation = 0.0;
  DualCertificate certificate;
  int iterations_used = 0;
  bool converged = false;
  /// Objective after each accepted iteration (first entry: starting point).
  std::vector<double> energy_trace;
};

/// One TV-JKO step by forward-backward splitting.
///
/// The returned `converged` flag reflects the certificate test only; when the
/// iteration cap is hit the last (lowest-energy) iterate is returned.
JkoStepResult jko_step(const GridDensity& rho0, const JkoConfig& config,
                       const std::optional<GridDensity>& initial_guess = std::nullopt);

/// Objective value of a candidate rho for the step started at rho0.
double jko_energy(const GridDensity& rho0, const GridDensity& rho, double tau, double entropy_h = 0.0);

struct EntropicResult {
  double h = 0.0;
  JkoStepResult step;
  /// min_i h log rho_i (finite when the solution is strictly positive).
  double min_h_log_rho = 0.0;
};

/// Solves the entropic step for each h in a strictly decreasing positive list.
/// Independent solves run in parallel; results are in input order.
std::vector<EntropicResult> entropic_step_family(const GridDensity& rho0, double tau,
                                                 const std::vector<double>& h_values,
                                                 const JkoConfig& base = {});

}  // namespace tvjko
