#include "tvjko/analytic_reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvjko {

double uniform_alpha_next(double alpha_k, double tau) {
  if (!(alpha_k > 0.0) || !(tau > 0.0)) throw std::invalid_argument("uniform_alpha_next: need positive inputs");
  auto f = [&](double a) { return a * a * (a - alpha_k) - 3.0 * tau; };
  double lo = alpha_k;
  // f(alpha_k + 3 tau / alpha_k^2) >= 0, and likewise for the cube-root bound.
  double hi = alpha_k + std::min(3.0 * tau / (alpha_k * alpha_k), std::cbrt(3.0 * tau));
  double a = hi;
  for (int it = 0; it < 200; ++it) {
    const double fa = f(a);
    if (fa > 0.0) hi = a; else lo = a;
    const double df = 3.0 * a * a - 2.0 * alpha_k * a;
    double next = a - fa / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - a) <= 1e-16 * next || hi - lo <= 1e-16 * hi) {
      a = next;
      break;
    }
    a = next;
  }
  return a;
}

UniformEvolution UniformEvolution::build(double alpha0, double tau, int steps) {
  if (steps < 0) throw std::invalid_argument("UniformEvolution: negative step count");
  UniformEvolution ev{alpha0, tau, {alpha0}};
  for (int k = 0; k < steps; ++k) ev.alphas.push_back(uniform_alpha_next(ev.alphas.back(), tau));
  return ev;
}

double UniformEvolution::closed_form(double t) const { return std::cbrt(alpha0 * alpha0 * alpha0 + 9.0 * t); }

double hat_tau_of_beta(double b) {
  const double k = 2.0 - b;
  const double m = 1.0 - b;
  return b * b * b / 3.0 - b * b / 2.0 + 4.0 * (1.0 - std::pow(m, 5)) / (15.0 * k * k) -
         2.0 * m * m * m * b / (3.0 * k);
}

double hat_beta_of_tau(double tau) {
  if (!(tau > 0.0 && tau < 0.1)) throw std::invalid_argument("hat_beta_of_tau: tau must lie in (0, 1/10)");
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (hat_tau_of_beta(mid) < tau) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> AnalyticPair::phi_cell_averages() const {
  const auto& g = rho1.grid();
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = (phi_antiderivative(g.interface(i + 1)) - phi_antiderivative(g.interface(i))) / g.dx();
  }
  return out;
}

std::vector<double> AnalyticPair::z_interfaces() const {
  const auto& g = rho1.grid();
  std::vector<double> out(g.size() + 1);
  for (std::size_t j = 0; j <= g.size(); ++j) out[j] = z(g.interface(j));
  out.front() = 0.0;
  out.back() = 0.0;
  return out;
}

namespace {

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Box density of half-width a as a cumulative distribution.
std::function<double(double)> box_cdf(double a) {
  return [a](double x) { return std::clamp((x + a) / (2.0 * a), 0.0, 1.0); };
}

// Odd extension of a primitive given on [0, inf).
std::function<double(double)> odd(std::function<double(double)> f) {
  return [f](double x) { return sgn(x) * f(std::abs(x)); };
}

void require_inside(const GridSpec& grid, double reach, const char* what) {
  if (!(grid.left() < -reach && reach < grid.right())) {
    throw std::invalid_argument(std::string("analytic_profiles: grid too small for the ") + what);
  }
}

// Distance past `edge` at which z = 1 - (primitive of phi from edge)/tau
// reaches zero, found by bisection (phi > 0 and increasing there).
double vacuum_reach(const std::function<double(double)>& excess, double tau, double edge) {
  double hi = edge + 1.0;
  while (excess(hi) < tau) hi = edge + 2.0 * (hi - edge);
  double lo = edge;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < tau) lo = mid; else hi = mid;
  }
  return hi;
}

AnalyticPair uniform_pair(const UniformProfile& u, const GridSpec& grid) {
  if (!(u.alpha0 > 0.0) || !(u.tau > 0.0)) throw std::invalid_argument("analytic_profiles: invalid box profile");
  const double a0 = u.alpha0, tau = u.tau;
  const double a1 = uniform_alpha_next(a0, tau);
  const double gap = a1 - a0;

  // Primitive from 0 on [0, inf): zero at the support edge value -tau.
  auto prim = [=](double x) {
    if (x <= a1) return gap * x * x * x / (6.0 * a1) - 3.0 * tau * x / (2.0 * a1);
    auto outer = [&](double s) { return std::pow(s - a0, 3) / 6.0 - gap * gap * s / 2.0; };
    return -tau + outer(x) - outer(a1);
  };
  auto phi_pos = [=](double x) {
    if (x <= a1) return gap * x * x / (2.0 * a1) - 3.0 * tau / (2.0 * a1);
    return (x - a0) * (x - a0) / 2.0 - gap * gap / 2.0;
  };
  const double reach = vacuum_reach([&](double x) { return prim(x) - prim(a1); }, tau, a1);
  require_inside(grid, reach, "box profile");

  AnalyticPair p{GridDensity::from_antiderivative(grid, box_cdf(a0)),
                 GridDensity::from_antiderivative(grid, box_cdf(a1)), tau, a1, 1.0 / (2.0 * a1), {}, {}, {}};
  p.phi = [=](double x) { return phi_pos(std::abs(x)); };
  p.phi_antiderivative = odd(prim);
  p.z = odd([=](double x) { return x <= a1 ? -prim(x) / tau : std::max(0.0, -prim(x) / tau); });
  return p;
}

AnalyticPair hat_pair(const HatProfile& h, const GridSpec& grid) {
  const double tau = h.tau;
  const double b = hat_beta_of_tau(tau);
  const double k = 2.0 - b;
  const double c = -b * b / 2.0 + b + 2.0 * std::pow(1.0 - b, 3) / (3.0 * k);
  const double q = 4.0 / (15.0 * k * k);

  auto inner_prim = [=](double x) {
    return x * x * x / 6.0 - x * x / 2.0 + q * std::pow(1.0 - k * x, 2.5) + c * x - q;
  };
  const double at_beta = inner_prim(b);
  auto prim = [=](double x) {
    if (x < b) return inner_prim(x);
    if (x <= 1.0) return at_beta;
    return at_beta + std::pow(x - 1.0, 3) / 6.0;
  };
  auto phi_pos = [=](double x) {
    if (x < b) return x * x / 2.0 - x - std::pow(1.0 - k * x, 1.5) / (3.0 * (1.0 - b / 2.0)) + c;
    if (x <= 1.0) return 0.0;
    return (x - 1.0) * (x - 1.0) / 2.0;
  };
  require_inside(grid, 1.0 + std::cbrt(6.0 * tau), "hat profile");

  auto hat_cdf = [](double x) {
    x = std::clamp(x, -1.0, 1.0);
    return x < 0.0 ? 0.5 * (1.0 + x) * (1.0 + x) : 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
  };
  const double top = 1.0 - b / 2.0;
  auto plateau_cdf = [=](double x) {
    if (std::abs(x) < b) return 0.5 + top * x;
    return hat_cdf(x);
  };
  AnalyticPair p{GridDensity::from_antiderivative(grid, hat_cdf), GridDensity::from_antiderivative(grid, plateau_cdf),
                 tau, b, top, {}, {}, {}};
  p.phi = [=](double x) { return phi_pos(std::abs(x)); };
  p.phi_antiderivative = odd(prim);
  p.z = odd([=](double x) {
    if (x < b) return -inner_prim(x) / tau;
    if (x <= 1.0) return 1.0;
    return std::max(0.0, 1.0 - std::pow(x - 1.0, 3) / (6.0 * tau));
  });
  return p;
}

}  // namespace

AnalyticPair analytic_profiles(const ProfileKind& kind, const GridSpec& grid) {
  if (const auto* u = std::get_if<UniformProfile>(&kind)) return uniform_pair(*u, grid);
  return hat_pair(std::get<HatProfile>(kind), grid);
}

double box_half_width(const GridDensity& rho) {
  const double peak = rho.max_value();
  double width = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) width += std::min(rho[i] / peak, 1.0);
  return 0.5 * width * rho.grid().dx();
}

}  // namespace tvjko
