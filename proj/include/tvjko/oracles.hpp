#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tvjko/grid_density.hpp"
#include "tvjko/radial.hpp"
#include "tvjko/tv_prox.hpp"

namespace tvjko {

/// Seeded random profiles: a background level plus Gaussian bumps and one
/// box step. Values are not normalized.
struct ProfileOptions {
  /// Background level; 0 lets the profile vanish between features.
  double floor = 0.0;
  int bumps = 3;
  bool with_step = true;
};

std::vector<double> random_profile_values(const GridSpec& grid, std::mt19937_64& rng,
                                          const ProfileOptions& options = {});
GridDensity random_density(const GridSpec& grid, std::mt19937_64& rng, const ProfileOptions& options = {});

namespace oracles {

/// Midpoint rule for int_0^1 |F0^{-1}(s) - F1^{-1}(s)|^2 ds on `samples` levels.
double w2_quadrature(const GridDensity& rho0, const GridDensity& rho1, std::size_t samples = 1000000);

/// Minimum-cost perfect matching for a square cost matrix (row-major);
/// returns the matched column of every row.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n);

/// Squared W2 between two uniform measures on n atoms each, by assignment.
double assignment_w2_squared(const std::vector<double>& xs, const std::vector<double>& ys);

/// TV prox through its dual box-constrained QP: projected gradient followed
/// by an exact solve on the active set, repeated until the KKT conditions
/// hold to roundoff.
std::vector<double> tv_prox_qp(const ProxProblem& problem);

/// Relative gap between the central difference
/// [W2^2(rho0, rho1 + e mu) - W2^2(rho0, rho1 - e mu)] / (4 e) and
/// sum_i phi_i mu_i dx. `direction` must carry zero mass.
double gradient_relative_error(const GridDensity& rho0, const GridDensity& rho1,
                               const std::vector<double>& direction, double eps = 1e-5);

/// Best disk profile (height on r < radius, fractional edge cell, unit
/// mass) for a radial step, by dense search over the radius.
struct DiskFit {
  double radius = 0.0;
  double height = 0.0;
  double energy = 0.0;
};

RadialDensity disk_profile(int dimension, double domain_radius, std::size_t n_cells, double radius);
DiskFit best_disk_profile(const RadialDensity& rho0, double tau, double min_radius, double max_radius,
                          int samples = 4000);

/// Radius of the disk with the same peak and mass as rho: sum min(rho/max, 1) dr.
double effective_radius(const RadialDensity& rho);

struct OracleTolerances {
  double w2_quadrature_relative = 1e-5;
  double w2_assignment_relative = 1e-8;
  double prox_absolute = 1e-8;
  double gradient_relative = 1e-4;
};

struct OracleOutcome {
  std::string name;
  int instances = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct OracleCounts {
  int transport_pairs = 100;
  int prox_instances = 100;
  int gradient_pairs = 10;
  int gradient_directions = 20;
  std::size_t quadrature_samples = 1000000;
};

/// Runs all oracle families on seeded instances. Deterministic in the seed.
std::vector<OracleOutcome> run_oracle_checks(std::uint64_t seed, const OracleTolerances& tol = {},
                                             const OracleCounts& counts = {});

}  // namespace oracles
}  // namespace tvjko
