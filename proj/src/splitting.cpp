#include "tvjko/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tvjko/transport1d.hpp"
#include "tvjko/tv_prox.hpp"

namespace tvjko {

void JkoConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("jko: tau must be positive");
  if (!(entropy_h >= 0.0) || !std::isfinite(entropy_h)) {
    throw std::invalid_argument("jko: entropy_h must be nonnegative");
  }
  if (max_outer_iter <= 0) throw std::invalid_argument("jko: max_outer_iter must be positive");
  if (!(el_tolerance > 0.0)) throw std::invalid_argument("jko: el_tolerance must be positive");
  if (!(step_rule.sigma >= 0.0) || !std::isfinite(step_rule.sigma)) {
    throw std::invalid_argument("jko: step size must be nonnegative");
  }
  if (step_rule.kind == StepRuleKind::fixed && !(step_rule.sigma > 0.0)) {
    throw std::invalid_argument("jko: fixed step rule needs a positive sigma");
  }
  if (!(min_density_floor >= 0.0)) throw std::invalid_argument("jko: min_density_floor must be >= 0");
}

std::vector<double> SplittingProblem::cell_measure() const {
  std::vector<double> mu(mass_factor.size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = mass_factor[i] * transport_grid.dx();
  return mu;
}

CertificateGeometry SplittingProblem::geometry() const {
  const std::size_t n = mass_factor.size();
  CertificateGeometry geo;
  geo.cell_measure = cell_measure();
  geo.interface_weight.assign(n + 1, 1.0);
  // Boundary weights never matter (z = 0 there) but keep them positive.
  geo.interface_weight[0] = edge_weight.empty() ? 1.0 : edge_weight.front();
  geo.interface_weight[n] = edge_weight.empty() ? 1.0 : edge_weight.back();
  for (std::size_t k = 0; k + 1 < n; ++k) geo.interface_weight[k + 1] = edge_weight[k];
  return geo;
}

namespace {

void check_problem(const SplittingProblem& p) {
  const std::size_t n = p.transport_grid.size();
  if (p.target.size() != n || p.mass_factor.size() != n || p.edge_weight.size() + 1 != n) {
    throw std::invalid_argument("splitting: inconsistent problem sizes");
  }
  for (double m : p.mass_factor) {
    if (!(m > 0.0)) throw std::invalid_argument("splitting: mass factors must be positive");
  }
  for (double w : p.edge_weight) {
    if (!(w > 0.0)) throw std::invalid_argument("splitting: edge weights must be positive");
  }
}

std::vector<double> mass_density(const SplittingProblem& p, const std::vector<double>& x) {
  std::vector<double> m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m[i] = p.mass_factor[i] * x[i];
  return m;
}

bool constant_factors(const std::vector<double>& f) {
  return std::all_of(f.begin(), f.end(), [&](double v) { return v == f.front(); });
}

// Exact projection onto {u >= 0, c sum u = 1}.
void project_uniform_simplex(std::vector<double>& u, double c) {
  std::vector<double> s(u);
  std::sort(s.begin(), s.end(), std::greater<>());
  const double target = 1.0 / c;
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double t = (cum - target) / static_cast<double>(k + 1);
    if (k + 1 == s.size() || s[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (double& v : u) v = std::max(v - theta, 0.0);
}

}  // namespace

std::vector<double> simplex_tv_prox(const std::vector<double>& v, const std::vector<double>& edge_weight,
                                    const std::vector<double>& mu, double s) {
  const std::size_t n = v.size();
  std::vector<double> thresholds(edge_weight.size());
  for (std::size_t k = 0; k < thresholds.size(); ++k) thresholds[k] = s * edge_weight[k];
  std::vector<double> u(n);

  if (constant_factors(mu)) {
    // A constant shift commutes with the TV prox, so the multiplier only
    // enters through the final projection.
    tv_prox_thresholds(v, thresholds, u);
    project_uniform_simplex(u, mu.front());
    return u;
  }

  std::vector<double> shifted(n);
  auto mass_at = [&](double theta) {
    for (std::size_t i = 0; i < n; ++i) shifted[i] = v[i] - theta * mu[i];
    tv_prox_thresholds(shifted, thresholds, u);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = std::max(u[i], 0.0);
      m += mu[i] * u[i];
    }
    return m;
  };

  // mass(theta) is continuous and nonincreasing; bracket the level 1.
  double lo = 0.0, hi = 0.0;
  double m_lo = mass_at(0.0), m_hi = m_lo;
  double v_max = 0.0;
  for (double x : v) v_max = std::max(v_max, std::abs(x));
  double step = std::max(1.0, v_max / *std::max_element(mu.begin(), mu.end()));
  if (m_lo > 1.0) {
    while (m_hi > 1.0) {
      lo = hi;
      m_lo = m_hi;
      hi += step;
      step *= 2.0;
      m_hi = mass_at(hi);
    }
  } else {
    while (m_lo < 1.0) {
      hi = lo;
      m_hi = m_lo;
      lo -= step;
      step *= 2.0;
      m_lo = mass_at(lo);
    }
  }
  // Illinois regula falsi; mass is piecewise linear in theta.
  int side = 0;
  double theta = lo, m = m_lo;
  for (int it = 0; it < 200; ++it) {
    theta = (m_hi == m_lo) ? 0.5 * (lo + hi) : lo + (m_lo - 1.0) * (hi - lo) / (m_lo - m_hi);
    if (!(theta > lo && theta < hi)) theta = 0.5 * (lo + hi);
    m = mass_at(theta);
    if (std::abs(m - 1.0) <= 1e-15 || hi - lo <= 1e-17 * std::max(1.0, std::abs(theta))) break;
    if (m > 1.0) {
      lo = theta;
      m_lo = m;
      if (side == -1) m_hi = 1.0 + 0.5 * (m_hi - 1.0);
      side = -1;
    } else {
      hi = theta;
      m_hi = m;
      if (side == 1) m_lo = 1.0 + 0.5 * (m_lo - 1.0);
      side = 1;
    }
  }
  mass_at(theta);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += mu[i] * u[i];
  if (total > 0.0) {
    for (double& x : u) x /= total;
  }
  return u;
}

SplittingEnergy evaluate_energy(const SplittingProblem& p, const std::vector<double>& x, double) {
  SplittingEnergy e;
  const auto m = mass_density(p, x);
  e.w2_squared = kernels::w2_squared(p.transport_grid, p.target, m);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) e.total_variation += p.edge_weight[k] * std::abs(x[k + 1] - x[k]);
  const double dx = p.transport_grid.dx();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) e.entropy += p.mass_factor[i] * dx * x[i] * std::log(x[i]);
  }
  e.total = e.w2_squared / (2.0 * p.tau) + e.total_variation + p.entropy_h * e.entropy;
  return e;
}

std::vector<double> splitting_gradient(const SplittingProblem& p, const std::vector<double>& x,
                                       const std::vector<double>& phi, double log_floor) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = phi[i] / p.tau;
    if (p.entropy_h > 0.0) g[i] += p.entropy_h * (1.0 + std::log(std::max(x[i], log_floor)));
  }
  return g;
}

namespace {

struct Iterate {
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> g;
  SplittingEnergy energy;
  DualCertificate cert;
};

Iterate make_iterate(const SplittingProblem& p, const CertificateGeometry& geo, std::vector<double> x,
                     double log_floor) {
  Iterate it;
  it.x = std::move(x);
  it.phi = kernels::potential(p.transport_grid, mass_density(p, it.x), p.target);
  it.g = splitting_gradient(p, it.x, it.phi, log_floor);
  it.energy = evaluate_energy(p, it.x, log_floor);
  it.cert = reconstruct_certificate(it.x, it.g, geo);
  return it;
}

// Energy comparisons below this level are roundoff: the prox output carries
// ~1e-12 absolute error, amplified by gradients of size |phi| / tau.
double energy_slack(double energy) { return 1e-10 * (1.0 + std::abs(energy)); }

// Zeroes cells far below the peak and restores unit mass. The prox leaves
// roundoff-sized plateaus in vacuum regions; kept, they act as support with
// no mass and make the potential a poor model of the transport cost. With
// entropy the optimum is strictly positive, so nothing is snapped.
void snap_vacuum(std::vector<double>& u, const std::vector<double>& mu) {
  const double cut = 1e-10 * *std::max_element(u.begin(), u.end());
  double mass = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] <= cut) u[i] = 0.0;
    mass += mu[i] * u[i];
  }
  for (double& v : u) v /= mass;
}

bool certified(const DualCertificate& c, double tol) {
  const double z_slack = std::max(1e-4, 100.0 * tol);
  return c.residual_el <= tol && c.max_abs_z <= 1.0 + z_slack && c.complementarity <= tol;
}

}  // namespace

SplittingResult solve_splitting(const SplittingProblem& p, std::vector<double> initial,
                                const JkoConfig& config) {
  config.validate();
  check_problem(p);
  const std::size_t n = p.transport_grid.size();
  if (initial.size() != n) throw std::invalid_argument("splitting: initial guess size mismatch");
  const auto mu = p.cell_measure();
  const auto geo = p.geometry();
  const double dx = p.transport_grid.dx();
  const double log_floor = config.log_floor();

  // Start from a feasible point.
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    initial[i] = std::max(initial[i], 0.0);
    mass += mu[i] * initial[i];
  }
  if (!(mass > 0.0)) throw std::invalid_argument("splitting: initial guess has no mass");
  for (double& v : initial) v /= mass;

  Iterate cur = make_iterate(p, geo, std::move(initial), log_floor);
  std::vector<double> prev = cur.x;
  SplittingResult res;
  res.energy_trace.push_back(cur.energy.total);

  const bool backtrack = config.step_rule.kind == StepRuleKind::backtracking;
  double sigma = config.step_rule.sigma > 0.0 ? config.step_rule.sigma : p.tau;
  const double sigma_min = 1e-14 * sigma;
  double t = 1.0;

  // One forward-backward step from `base`; false when the step size collapsed.
  auto fb_step = [&](const std::vector<double>& base, const std::vector<double>& g, const SplittingEnergy& e,
                     std::vector<double>& u) {
    const double f_base = e.total - e.total_variation;
    for (;;) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = base[i] - sigma * g[i] * p.mass_factor[i];
      u = simplex_tv_prox(v, p.edge_weight, mu, sigma / dx);
      if (p.entropy_h == 0.0) snap_vacuum(u, mu);
      if (!backtrack) return true;
      // Quadratic upper bound on the smooth part in the dx-weighted metric.
      const SplittingEnergy eu = evaluate_energy(p, u, log_floor);
      double lin = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = u[i] - base[i];
        lin += g[i] * mu[i] * d;
        sq += d * d;
      }
      if (eu.total - eu.total_variation <= f_base + lin + 0.5 * dx * sq / sigma + energy_slack(e.total)) return true;
      sigma *= 0.5;
      if (sigma < sigma_min) return false;
    }
  };

  int iter = 0;
  for (; iter < config.max_outer_iter; ++iter) {
    if (certified(cur.cert, config.el_tolerance)) {
      res.converged = true;
      break;
    }
    // Momentum, capped so the extrapolated point stays nonnegative (its
    // mass is unchanged because both iterates carry unit mass).
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    double b = config.accelerate ? (t - 1.0) / t_next : 0.0;
    for (std::size_t i = 0; i < n && b > 0.0; ++i) {
      const double d = cur.x[i] - prev[i];
      if (d < 0.0) b = std::min(b, cur.x[i] / -d);
    }

    std::vector<double> u;
    bool ok;
    if (b > 0.0) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = std::max(cur.x[i] + b * (cur.x[i] - prev[i]), 0.0);
      const auto phi_y = kernels::potential(p.transport_grid, mass_density(p, y), p.target);
      ok = fb_step(y, splitting_gradient(p, y, phi_y, log_floor), evaluate_energy(p, y, log_floor), u);
    } else {
      ok = fb_step(cur.x, cur.g, cur.energy, u);
    }
    if (!ok) break;  // step size collapsed; keep the current iterate
    Iterate next = make_iterate(p, geo, std::move(u), log_floor);
    if (next.energy.total > cur.energy.total + energy_slack(cur.energy.total)) {
      if (b > 0.0) {
        // Restart the momentum and retry from the current iterate.
        t = 1.0;
        prev = cur.x;
        continue;
      }
      if (backtrack) break;
    }
    prev = std::move(cur.x);
    cur = std::move(next);
    t = b > 0.0 ? t_next : std::max(1.0, t_next);
    res.energy_trace.push_back(cur.energy.total);
  }
  if (!res.converged && certified(cur.cert, config.el_tolerance)) res.converged = true;

  res.iterations = iter;
  res.x = std::move(cur.x);
  res.potential = std::move(cur.phi);
  res.certificate = std::move(cur.cert);
  res.energy = cur.energy;
  return res;
}

}  // namespace tvjko
