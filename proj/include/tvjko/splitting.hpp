#pragma once

#include <vector>

#include "tvjko/certificate.hpp"
#include "tvjko/grid_density.hpp"

namespace tvjko {

enum class StepRuleKind { fixed, backtracking };

struct StepRule {
  StepRuleKind kind = StepRuleKind::backtracking;
  /// Initial (backtracking) or constant (fixed) step; 0 selects tau.
  double sigma = 0.0;
};

struct JkoConfig {
  double tau = 1.0;
  double entropy_h = 0.0;
  int max_outer_iter = 20000;
  double el_tolerance = 1e-6;
  StepRule step_rule{};
  /// Floor inside the logarithm when entropy_h > 0; 0 selects 1e-300.
  double min_density_floor = 0.0;
  /// Nesterov momentum with adaptive restart on top of the plain splitting.
  bool accelerate = true;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  double log_floor() const { return min_density_floor > 0.0 ? min_density_floor : 1e-300; }
};

/// Convex problem over unknowns x_i >= 0 with sum_i mu_i x_i = 1:
///
///   (1/2 tau) W2^2(target, m(x)) + sum_k omega_k |x_{k+1} - x_k| + h sum_i mu_i x_i log x_i
///
/// where m_i = mass_factor_i x_i is a density on `transport_grid` and
/// mu_i = mass_factor_i dx. Plain 1D steps use mass_factor = 1 and unit
/// weights; the radial reduction uses the shell factor c_d r^{d-1}.
struct SplittingProblem {
  GridSpec transport_grid;
  std::vector<double> target;
  std::vector<double> mass_factor;
  std::vector<double> edge_weight;
  double tau = 1.0;
  double entropy_h = 0.0;

  std::vector<double> cell_measure() const;
  CertificateGeometry geometry() const;
};

struct SplittingEnergy {
  double w2_squared = 0.0;
  double total_variation = 0.0;
  double entropy = 0.0;
  double total = 0.0;
};

struct SplittingResult {
  std::vector<double> x;
  std::vector<double> potential;
  DualCertificate certificate;
  SplittingEnergy energy;
  std::vector<double> energy_trace;
  int iterations = 0;
  bool converged = false;
};

SplittingEnergy evaluate_energy(const SplittingProblem& problem, const std::vector<double>& x,
                                double log_floor = 1e-300);

/// Certificate gradient g_i = phi_i / tau + h log x_i for the given iterate.
std::vector<double> splitting_gradient(const SplittingProblem& problem, const std::vector<double>& x,
                                       const std::vector<double>& phi, double log_floor);

/// Backward step: argmin (1/2 s)||u - v||^2 + sum omega_k |du_k| over the
/// weighted simplex {u >= 0, sum mu_i u_i = 1}; s = sigma / dx.
std::vector<double> simplex_tv_prox(const std::vector<double>& v, const std::vector<double>& edge_weight,
                                    const std::vector<double>& mu, double s);

/// Forward-backward splitting with backtracking; stops on the certificate.
SplittingResult solve_splitting(const SplittingProblem& problem, std::vector<double> initial,
                                const JkoConfig& config);

}  // namespace tvjko
