#pragma once

#include <span>
#include <string>
#include <vector>

#include "tvjko/grid_density.hpp"

namespace tvjko {

/// Optimal transport data between the current density rho1 and the previous
/// density rho0 (backward orientation: T pushes rho1 forward to rho0).
struct TransportData {
  double w2_squared = 0.0;
  /// T(x_i) = F0^{-1}(F1(x_i)) at cell centers.
  std::vector<double> map_values;
  /// Kantorovich potential, cell averages of phi with phi' = id - T,
  /// shifted to zero mean over the domain.
  std::vector<double> potential;
};

/// Exact squared 2-Wasserstein distance between piecewise-constant densities.
double w2_squared(const GridDensity& rho0, const GridDensity& rho1);

/// Monotone rearrangement T = F0^{-1} o F1 sampled at cell centers.
std::vector<double> monotone_map(const GridDensity& rho1, const GridDensity& rho0);

/// Zero-mean Kantorovich potential between rho1 and rho0.
///
/// Entry i is the exact average over cell i of the continuous potential
/// phi(x) = int_a^x (y - T(y)) dy, so that for every zero-mass perturbation
/// mu, d/de [W2^2(rho0, rho1 + e mu) / 2] = sum_i phi_i mu_i dx wherever
/// rho1 > 0.
std::vector<double> kantorovich_potential(const GridDensity& rho1, const GridDensity& rho0);

TransportData compute_transport(const GridDensity& rho1, const GridDensity& rho0);

/// Writes `x,T,phi`.
void write_transport_csv(const std::string& path, const GridSpec& grid, const TransportData& data);

namespace kernels {

// Value-array entry points used inside solver loops. Both arrays live on
// `grid` and are assumed to carry unit mass.
double w2_squared(const GridSpec& grid, std::span<const double> rho0, std::span<const double> rho1);
std::vector<double> potential(const GridSpec& grid, std::span<const double> rho1,
                              std::span<const double> rho0);

}  // namespace kernels

}  // namespace tvjko
