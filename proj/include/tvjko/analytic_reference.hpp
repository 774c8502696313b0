#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "tvjko/grid_density.hpp"

namespace tvjko {

/// Root alpha in (alpha_k, inf) of alpha^2 (alpha - alpha_k) = 3 tau.
double uniform_alpha_next(double alpha_k, double tau);

/// Half-widths of the box-density trajectory alpha_0 < alpha_1 < ...
struct UniformEvolution {
  double alpha0 = 1.0;
  double tau = 1.0;
  std::vector<double> alphas;

  static UniformEvolution build(double alpha0, double tau, int steps);
  /// Continuous-time half-width (alpha0^3 + 9 t)^{1/3}.
  double closed_form(double t) const;
};

/// Step size for which the hat density develops a plateau on |x| < beta.
double hat_tau_of_beta(double beta);

/// Bisection root of hat_tau_of_beta(beta) = tau for 0 < tau < 1/10.
double hat_beta_of_tau(double tau);

struct UniformProfile {
  double alpha0 = 1.0;
  double tau = 1.0;
};

struct HatProfile {
  double tau = 1.0 / 270.0;
};

using ProfileKind = std::variant<UniformProfile, HatProfile>;

/// Closed-form optimal pair (rho0, rho1) with its potential and field.
///
/// phi vanishes at the edge of the jump set, so phi/tau + z' = 0 on the
/// support without any additive constant. On a bounded grid z is continued
/// past the support by integrating the same equation until it hits 0.
struct AnalyticPair {
  GridDensity rho0;
  GridDensity rho1;
  double tau = 0.0;
  /// alpha_1 for the box, beta for the hat.
  double jump_location = 0.0;
  double plateau_height = 0.0;
  std::function<double(double)> phi;
  std::function<double(double)> phi_antiderivative;
  std::function<double(double)> z;

  /// Exact cell averages of phi.
  std::vector<double> phi_cell_averages() const;
  /// z sampled at the N+1 interfaces.
  std::vector<double> z_interfaces() const;
};

/// Throws std::invalid_argument when the grid cannot hold the profile.
AnalyticPair analytic_profiles(const ProfileKind& kind, const GridSpec& grid);

/// Half-width of a centered box carrying the same mass at the same peak:
/// (1/2) sum_i min(rho_i / max rho, 1) dx. Exact for a box whose edges fall
/// inside cells.
double box_half_width(const GridDensity& rho);

}  // namespace tvjko
