#include "tvjko/radial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tvjko {

double sphere_measure(int d) {
  if (d < 1) throw std::invalid_argument("sphere_measure: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace {

double shell_mass(int d, const GridSpec& grid, std::span<const double> v) {
  const double c = sphere_measure(d);
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m += c * std::pow(grid.center(i), d - 1) * v[i] * grid.dx();
  return m;
}

}  // namespace

RadialDensity::RadialDensity(int dimension, double radius, std::size_t n_cells, std::vector<double> values)
    : dimension_(dimension), grid_(0.0, radius, n_cells), values_(std::move(values)) {
  sphere_measure(dimension);
  if (values_.size() != n_cells) throw std::invalid_argument("RadialDensity: expected one value per cell");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("RadialDensity: negative or non-finite value at cell " + std::to_string(i));
    }
  }
  const double m = shell_mass(dimension_, grid_, values_);
  if (std::abs(m - 1.0) > GridDensity::kMassTolerance) {
    throw std::invalid_argument("RadialDensity: total mass " + std::to_string(m) + " is not 1");
  }
  for (double& v : values_) v /= m;
}

RadialDensity RadialDensity::normalized(int dimension, double radius, std::size_t n_cells,
                                        std::vector<double> values) {
  GridSpec grid(0.0, radius, n_cells);
  if (values.size() != n_cells) throw std::invalid_argument("RadialDensity: expected one value per cell");
  const double m = shell_mass(dimension, grid, values);
  if (!(m > 0.0)) throw std::invalid_argument("RadialDensity: no mass to normalize");
  for (double& v : values) v /= m;
  return RadialDensity(dimension, radius, n_cells, std::move(values));
}

std::vector<double> RadialDensity::shell_factor() const {
  const double c = sphere_measure(dimension_);
  std::vector<double> f(size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = c * std::pow(grid_.center(i), dimension_ - 1);
  return f;
}

std::vector<double> RadialDensity::interface_factor() const {
  const double c = sphere_measure(dimension_);
  std::vector<double> f(size() - 1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = c * std::pow(grid_.interface(k + 1), dimension_ - 1);
  return f;
}

std::vector<double> RadialDensity::mass_density() const {
  auto m = shell_factor();
  for (std::size_t i = 0; i < m.size(); ++i) m[i] *= values_[i];
  return m;
}

double RadialDensity::total_mass() const { return shell_mass(dimension_, grid_, values_); }
double RadialDensity::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double RadialDensity::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double weighted_total_variation(const RadialDensity& rho) {
  const auto w = rho.interface_factor();
  double tv = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) tv += w[k] * std::abs(rho[k + 1] - rho[k]);
  return tv;
}

SplittingProblem radial_problem(const RadialDensity& rho0, double tau, double entropy_h) {
  return SplittingProblem{rho0.grid(), rho0.mass_density(), rho0.shell_factor(), rho0.interface_factor(), tau,
                          entropy_h};
}

double radial_energy(const RadialDensity& rho0, const RadialDensity& rho, double tau) {
  if (!(rho.grid() == rho0.grid()) || rho.dimension() != rho0.dimension()) {
    throw std::invalid_argument("radial_energy: mismatched profiles");
  }
  const auto p = radial_problem(rho0, tau);
  return evaluate_energy(p, std::vector<double>(rho.values().begin(), rho.values().end())).total;
}

RadialStepResult radial_jko_step(const RadialDensity& rho0, const JkoConfig& config) {
  config.validate();
  const auto p = radial_problem(rho0, config.tau, config.entropy_h);
  auto sol = solve_splitting(p, std::vector<double>(rho0.values().begin(), rho0.values().end()), config);

  const auto geo = p.geometry();
  double lip = 0.0;
  const auto& z = sol.certificate.z_values;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    const double w_lo = j == 0 ? 0.0 : geo.interface_weight[j];
    const double w_hi = geo.interface_weight[j + 1];
    lip = std::max(lip, std::abs(w_hi * z[j + 1] - w_lo * z[j]) / rho0.grid().dx());
  }

  return RadialStepResult{RadialDensity(rho0.dimension(), rho0.radius(), rho0.size(), std::move(sol.x)),
                          std::move(sol.certificate),
                          sol.energy.w2_squared,
                          sol.energy.total_variation,
                          sol.energy.total,
                          sol.iterations,
                          sol.converged,
                          lip,
                          std::move(sol.energy_trace)};
}

MinPrincipleReport radial_min_principle_check(const RadialDensity& rho0, const RadialDensity& result,
                                              double alpha, double el_tolerance) {
  MinPrincipleReport rep;
  rep.alpha = alpha;
  rep.eps_grid = 10.0 * el_tolerance + 2.0 * rho0.max_value() * rho0.grid().dx();
  const auto it = std::min_element(result.values().begin(), result.values().end());
  const std::size_t at = static_cast<std::size_t>(it - result.values().begin());
  rep.min_value = *it;
  rep.min_location = result.grid().center(at);
  if (!(alpha > 0.0) || rho0.min_value() < alpha) {
    rep.note = "precondition unmet: need min rho0 >= alpha > 0";
    return rep;
  }
  rep.precondition_met = true;
  rep.margin = rep.min_value - (alpha - rep.eps_grid);
  rep.passed = rep.margin >= 0.0;
  return rep;
}

void write_radial_csv(const std::string& path, const RadialDensity& rho) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << std::setprecision(17) << "r,rho\n";
  for (std::size_t i = 0; i < rho.size(); ++i) out << rho.grid().center(i) << ',' << rho[i] << '\n';
}

}  // namespace tvjko
