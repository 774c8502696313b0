#pragma once

#include <string>
#include <vector>

#include "tvjko/certificate.hpp"
#include "tvjko/grid_density.hpp"
#include "tvjko/splitting.hpp"

namespace tvjko {

/// Surface measure of the unit sphere in R^d (2, 2 pi, 4 pi, ...).
double sphere_measure(int dimension);

/// Radially symmetric density on the ball B(0, R), sampled on [0, R].
class RadialDensity {
 public:
  /// Values within 1e-6 of unit mass are rescaled; others are rejected.
  RadialDensity(int dimension, double radius, std::size_t n_cells, std::vector<double> values);

  static RadialDensity normalized(int dimension, double radius, std::size_t n_cells,
                                  std::vector<double> values);

  int dimension() const { return dimension_; }
  double radius() const { return grid_.right(); }
  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Shell factor c_d r_i^{d-1} at cell centers.
  std::vector<double> shell_factor() const;
  /// c_d r_{i+1/2}^{d-1} at the N-1 interior interfaces.
  std::vector<double> interface_factor() const;
  /// Mass density m_i = c_d r_i^{d-1} rho_i on [0, R].
  std::vector<double> mass_density() const;
  double total_mass() const;
  double min_value() const;
  double max_value() const;

 private:
  int dimension_;
  GridSpec grid_;
  std::vector<double> values_;
};

struct RadialStepResult {
  RadialDensity rho1;
  DualCertificate certificate;
  double w2_squared = 0.0;
  double weighted_tv = 0.0;
  double energy = 0.0;
  int iterations_used = 0;
  bool converged = false;
  /// max_j |w_{j+1} z_{j+1} - w_j z_j| / dr, a Lipschitz monitor for r^{d-1} z.
  double flux_lipschitz = 0.0;
  std::vector<double> energy_trace;
};

/// The reduced weighted problem for a radial step; exposed for oracles.
SplittingProblem radial_problem(const RadialDensity& rho0, double tau, double entropy_h = 0.0);

RadialStepResult radial_jko_step(const RadialDensity& rho0, const JkoConfig& config);

/// Discrete reduced energy of a candidate profile.
double radial_energy(const RadialDensity& rho0, const RadialDensity& rho, double tau);

/// Weighted total variation c_d sum r_{i+1/2}^{d-1} |rho_{i+1} - rho_i|.
double weighted_total_variation(const RadialDensity& rho);

struct MinPrincipleReport {
  bool precondition_met = false;
  bool passed = false;
  double alpha = 0.0;
  double min_value = 0.0;
  double min_location = 0.0;
  /// min rho1 - (alpha - eps_grid); negative on failure.
  double margin = 0.0;
  double eps_grid = 0.0;
  std::string note;
};

/// Checks min rho1 >= alpha - eps_grid, with eps_grid = 10 tol + 2 max rho0 dr.
MinPrincipleReport radial_min_principle_check(const RadialDensity& rho0, const RadialDensity& result,
                                              double alpha, double el_tolerance = 1e-6);

/// Writes `r,rho`.
void write_radial_csv(const std::string& path, const RadialDensity& rho);

}  // namespace tvjko
