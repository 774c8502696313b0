#include "tvjko/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tvjko/parallel.hpp"
#include "tvjko/transport1d.hpp"

namespace tvjko {

std::vector<double> random_profile_values(const GridSpec& grid, std::mt19937_64& rng,
                                          const ProfileOptions& options) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = grid.left();
  const double len = grid.length();
  std::vector<double> v(grid.size(), options.floor);
  for (int b = 0; b < options.bumps; ++b) {
    const double c = a + len * (0.15 + 0.7 * unit(rng));
    const double w = len * (0.03 + 0.12 * unit(rng));
    const double h = 0.2 + unit(rng);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double s = (grid.center(i) - c) / w;
      v[i] += h * std::exp(-0.5 * s * s);
    }
  }
  if (options.with_step) {
    const double lo = a + len * (0.1 + 0.4 * unit(rng));
    const double hi = lo + len * (0.1 + 0.3 * unit(rng));
    const double h = 0.3 + unit(rng);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = grid.center(i);
      if (x > lo && x < hi) v[i] += h;
    }
  }
  // Cut the far tails of the bumps so floor = 0 profiles have true vacuum.
  if (options.floor == 0.0) {
    const double peak = *std::max_element(v.begin(), v.end());
    for (double& x : v) {
      if (x < 1e-3 * peak) x = 0.0;
    }
  }
  return v;
}

GridDensity random_density(const GridSpec& grid, std::mt19937_64& rng, const ProfileOptions& options) {
  return GridDensity::normalized(grid, random_profile_values(grid, rng, options));
}

namespace oracles {

double w2_quadrature(const GridDensity& rho0, const GridDensity& rho1, std::size_t samples) {
  const CdfFunction f0(rho0);
  const CdfFunction f1(rho1);
  const double h = 1.0 / static_cast<double>(samples);
  const double sum = parallel::chunked_sum(samples, [&](std::size_t k) {
    const double s = (static_cast<double>(k) + 0.5) * h;
    const double d = f0.quantile(s) - f1.quantile(s);
    return d * d;
  });
  return sum * h;
}

std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n) {
  if (n <= 0 || cost.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("min_cost_assignment: cost must be n x n");
  }
  // Shortest augmenting paths with row and column potentials (1-based).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

double assignment_w2_squared(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  if (ys.size() != xs.size() || n == 0) throw std::invalid_argument("assignment_w2_squared: sizes differ");
  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cost[i * n + j] = (xs[i] - ys[j]) * (xs[i] - ys[j]);
  }
  const auto match = min_cost_assignment(cost, n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost[i * n + match[i]];
  return total / n;
}

namespace {

// Dense Gaussian elimination with partial pivoting; a is row-major k x k.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t k = b.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::abs(a[r * k + c]) > std::abs(a[piv * k + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < k; ++r) {
      const double f = a[r * k + c] / a[c * k + c];
      for (std::size_t j = c; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(k);
  for (std::size_t c = k; c-- > 0;) {
    double s = b[c];
    for (std::size_t j = c + 1; j < k; ++j) s -= a[c * k + j] * x[j];
    x[c] = s / a[c * k + c];
  }
  return x;
}

// u = y - D^T p with (D u)_k = u_{k+1} - u_k.
std::vector<double> primal_from_dual(const std::vector<double>& y, const std::vector<double>& p) {
  std::vector<double> u = y;
  for (std::size_t k = 0; k < p.size(); ++k) {
    u[k] += p[k];
    u[k + 1] -= p[k];
  }
  return u;
}

}  // namespace

std::vector<double> tv_prox_qp(const ProxProblem& problem) {
  const auto& y = problem.input;
  const std::size_t n = y.size();
  if (n < 2) return y;
  const std::size_t m = n - 1;
  std::vector<double> bound(m, problem.lambda);
  if (problem.weights) {
    if (problem.weights->size() != m) throw std::invalid_argument("tv_prox_qp: weights need N-1 entries");
    for (std::size_t k = 0; k < m; ++k) bound[k] *= (*problem.weights)[k];
  }
  auto clamp = [&](std::vector<double>& p) {
    for (std::size_t k = 0; k < m; ++k) p[k] = std::clamp(p[k], -bound[k], bound[k]);
  };

  // Accelerated projected gradient on min_p 1/2 ||y - D^T p||^2, |p_k| <= bound_k.
  std::vector<double> p(m, 0.0), q = p, prev = p;
  double t = 1.0;
  for (int it = 0; it < 20000; ++it) {
    const auto u = primal_from_dual(y, q);
    prev = p;
    for (std::size_t k = 0; k < m; ++k) p[k] = q[k] + 0.25 * (u[k + 1] - u[k]);
    clamp(p);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t k = 0; k < m; ++k) q[k] = p[k] + (t - 1.0) / tn * (p[k] - prev[k]);
    t = tn;
  }

  // Active-set refinement: fix bound constraints, solve the rest exactly,
  // then move violators between the sets until the KKT conditions hold.
  std::vector<int> side(m, 0);  // -1 lower, +1 upper, 0 free
  for (std::size_t k = 0; k < m; ++k) {
    if (p[k] >= bound[k] * (1.0 - 1e-9)) side[k] = 1;
    else if (p[k] <= -bound[k] * (1.0 - 1e-9)) side[k] = -1;
  }
  for (int round = 0; round < 200; ++round) {
    std::vector<std::size_t> free;
    std::vector<double> fixed(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      if (side[k] == 0) free.push_back(k);
      else fixed[k] = side[k] * bound[k];
    }
    const auto r = primal_from_dual(y, fixed);
    const std::size_t f = free.size();
    std::vector<double> a(f * f, 0.0), rhs(f);
    for (std::size_t i = 0; i < f; ++i) {
      rhs[i] = r[free[i] + 1] - r[free[i]];
      for (std::size_t j = 0; j < f; ++j) {
        const auto d = static_cast<long>(free[i]) - static_cast<long>(free[j]);
        a[i * f + j] = d == 0 ? 2.0 : (std::abs(d) == 1 ? -1.0 : 0.0);
      }
    }
    // Stationarity in p_F: (D_F D_F^T) p_F = D_F r.
    const auto pf = f > 0 ? solve_dense(a, rhs) : std::vector<double>{};
    p = fixed;
    for (std::size_t i = 0; i < f; ++i) p[free[i]] = pf[i];
    const auto u = primal_from_dual(y, p);
    bool changed = false;
    for (std::size_t k = 0; k < m; ++k) {
      const double du = u[k + 1] - u[k];
      const double slack = 1e-13 * (1.0 + bound[k]);
      if (side[k] == 0 && std::abs(p[k]) > bound[k] + slack) {
        side[k] = p[k] > 0.0 ? 1 : -1;
        changed = true;
      } else if (side[k] == 1 && du < -slack) {
        side[k] = 0;
        changed = true;
      } else if (side[k] == -1 && du > slack) {
        side[k] = 0;
        changed = true;
      }
    }
    if (!changed) return u;
  }
  clamp(p);
  return primal_from_dual(y, p);
}

double gradient_relative_error(const GridDensity& rho0, const GridDensity& rho1,
                               const std::vector<double>& direction, double eps) {
  const auto& grid = rho1.grid();
  const std::size_t n = grid.size();
  if (direction.size() != n) throw std::invalid_argument("gradient_relative_error: direction size mismatch");
  std::vector<double> plus(n), minus(n);
  for (std::size_t i = 0; i < n; ++i) {
    plus[i] = rho1[i] + eps * direction[i];
    minus[i] = rho1[i] - eps * direction[i];
    if (minus[i] < 0.0 || plus[i] < 0.0) {
      throw std::invalid_argument("gradient_relative_error: perturbation leaves the positive cone");
    }
  }
  const double fd = (kernels::w2_squared(grid, rho0.values(), plus) -
                     kernels::w2_squared(grid, rho0.values(), minus)) / (4.0 * eps);
  const auto phi = kantorovich_potential(rho1, rho0);
  double analytic = 0.0;
  for (std::size_t i = 0; i < n; ++i) analytic += phi[i] * direction[i] * grid.dx();
  return std::abs(fd - analytic) / std::abs(analytic);
}

RadialDensity disk_profile(int dimension, double domain_radius, std::size_t n_cells, double radius) {
  const GridSpec grid(0.0, domain_radius, n_cells);
  std::vector<double> v(n_cells, 0.0);
  for (std::size_t i = 0; i < n_cells; ++i) {
    v[i] = std::clamp((radius - grid.interface(i)) / grid.dx(), 0.0, 1.0);
  }
  return RadialDensity::normalized(dimension, domain_radius, n_cells, std::move(v));
}

DiskFit best_disk_profile(const RadialDensity& rho0, double tau, double min_radius, double max_radius,
                          int samples) {
  if (!(max_radius > min_radius) || samples < 2) throw std::invalid_argument("best_disk_profile: bad range");
  const int d = rho0.dimension();
  const double R = rho0.radius();
  const std::size_t n = rho0.size();
  auto energy = [&](double r) { return radial_energy(rho0, disk_profile(d, R, n, r), tau); };
  const double step = (max_radius - min_radius) / (samples - 1);
  int best = 0;
  double best_e = energy(min_radius);
  for (int k = 1; k < samples; ++k) {
    const double e = energy(min_radius + k * step);
    if (e < best_e) {
      best_e = e;
      best = k;
    }
  }
  // Golden-section refinement inside the neighbouring samples.
  double lo = min_radius + std::max(best - 1, 0) * step;
  double hi = min_radius + std::min(best + 1, samples - 1) * step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double ea = energy(a), eb = energy(b);
  for (int it = 0; it < 60; ++it) {
    if (ea < eb) {
      hi = b;
      b = a;
      eb = ea;
      a = hi - g * (hi - lo);
      ea = energy(a);
    } else {
      lo = a;
      a = b;
      ea = eb;
      b = lo + g * (hi - lo);
      eb = energy(b);
    }
  }
  DiskFit fit;
  fit.radius = 0.5 * (lo + hi);
  fit.energy = energy(fit.radius);
  if (best_e < fit.energy) {
    fit.radius = min_radius + best * step;
    fit.energy = best_e;
  }
  fit.height = disk_profile(d, R, n, fit.radius).max_value();
  return fit;
}

double effective_radius(const RadialDensity& rho) {
  const double peak = rho.max_value();
  double r = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) r += std::min(rho[i] / peak, 1.0);
  return r * rho.grid().dx();
}

namespace {

OracleOutcome make_outcome(std::string name, int instances, double deviation, double tolerance) {
  OracleOutcome o;
  o.name = std::move(name);
  o.instances = instances;
  o.max_deviation = deviation;
  o.tolerance = tolerance;
  o.passed = deviation <= tolerance;
  return o;
}

}  // namespace

std::vector<OracleOutcome> run_oracle_checks(std::uint64_t seed, const OracleTolerances& tol,
                                             const OracleCounts& counts) {
  std::vector<OracleOutcome> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Exact transport against sample quadrature of the quantile formula.
  double worst_quad = 0.0;
  for (int k = 0; k < counts.transport_pairs; ++k) {
    const std::size_t n = 32 + static_cast<std::size_t>(unit(rng) * 224);
    const GridSpec grid(-1.0, 2.0, n);
    ProfileOptions opt;
    opt.floor = (k % 2 == 0) ? 0.1 * unit(rng) : 0.0;
    const auto a = random_density(grid, rng, opt);
    const auto b = random_density(grid, rng, opt);
    const double exact = w2_squared(a, b);
    const double quad = w2_quadrature(a, b, counts.quadrature_samples);
    worst_quad = std::max(worst_quad, std::abs(exact - quad) / exact);
  }
  out.push_back(make_outcome("w2_vs_quadrature", counts.transport_pairs, worst_quad, tol.w2_quadrature_relative));

  // Exact transport against assignment between equal-mass atoms. Each atom
  // is a block filling one cell; distinct cells per measure make the
  // monotone map a translation of blocks, so both costs coincide.
  double worst_assign = 0.0;
  for (int k = 0; k < counts.transport_pairs; ++k) {
    const GridSpec grid(0.0, 1.0, 128);
    const int atoms = 8 + static_cast<int>(unit(rng) * 57);
    auto pick = [&]() {
      std::vector<std::size_t> cells(grid.size());
      std::iota(cells.begin(), cells.end(), 0);
      std::shuffle(cells.begin(), cells.end(), rng);
      cells.resize(atoms);
      return cells;
    };
    const auto ca = pick();
    const auto cb = pick();
    std::vector<double> va(grid.size(), 0.0), vb(grid.size(), 0.0), xa, xb;
    for (int j = 0; j < atoms; ++j) {
      va[ca[j]] += 1.0;
      vb[cb[j]] += 1.0;
      xa.push_back(grid.center(ca[j]));
      xb.push_back(grid.center(cb[j]));
    }
    const double exact = w2_squared(GridDensity::normalized(grid, va), GridDensity::normalized(grid, vb));
    const double lp = assignment_w2_squared(xa, xb);
    worst_assign = std::max(worst_assign, std::abs(exact - lp) / lp);
  }
  out.push_back(make_outcome("w2_vs_assignment", counts.transport_pairs, worst_assign, tol.w2_assignment_relative));

  // Direct TV prox against the dual QP.
  double worst_prox = 0.0;
  for (int k = 0; k < counts.prox_instances; ++k) {
    ProxProblem p;
    const std::size_t n = 2 + static_cast<std::size_t>(unit(rng) * 15);
    p.input.resize(n);
    for (double& v : p.input) v = 2.0 * unit(rng) - 1.0;
    p.lambda = 0.01 + unit(rng);
    if (k % 2 == 1) {
      std::vector<double> w(n - 1);
      for (double& v : w) v = 0.5 + 1.5 * unit(rng);
      p.weights = w;
    }
    const auto direct = tv_prox(p);
    const auto qp = tv_prox_qp(p);
    for (std::size_t i = 0; i < n; ++i) worst_prox = std::max(worst_prox, std::abs(direct[i] - qp[i]));
  }
  out.push_back(make_outcome("tv_prox_vs_qp", counts.prox_instances, worst_prox, tol.prox_absolute));

  // Potential against central differences of the exact distance.
  double worst_grad = 0.0;
  for (int k = 0; k < counts.gradient_pairs; ++k) {
    const std::size_t n = 64 + static_cast<std::size_t>(unit(rng) * 64);
    const GridSpec grid(0.0, 1.0, n);
    ProfileOptions opt;
    opt.floor = 0.2 + 0.3 * unit(rng);
    const auto a = random_density(grid, rng, opt);
    const auto b = random_density(grid, rng, opt);
    for (int d = 0; d < counts.gradient_directions; ++d) {
      std::vector<double> mu(n);
      for (double& v : mu) v = 2.0 * unit(rng) - 1.0;
      const double mean = std::accumulate(mu.begin(), mu.end(), 0.0) / static_cast<double>(n);
      for (double& v : mu) v -= mean;
      worst_grad = std::max(worst_grad, gradient_relative_error(a, b, mu));
    }
  }
  out.push_back(make_outcome("potential_vs_finite_differences", counts.gradient_pairs * counts.gradient_directions,
                             worst_grad, tol.gradient_relative));
  return out;
}

}  // namespace oracles
}  // namespace tvjko
