#include "tvjko/flow_driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "tvjko/jko_solver.hpp"

namespace tvjko {

int step_count_for(double tau, double horizon) {
  if (!(tau > 0.0) || !(horizon >= tau)) throw std::invalid_argument("flow: need horizon >= tau > 0");
  return static_cast<int>(std::floor(horizon / tau + 1e-9));
}

std::vector<double> support_second_derivative(std::span<const double> rho, std::span<const double> z, double dx,
                                              double vacuum_relative) {
  const std::size_t n = rho.size();
  const double top = *std::max_element(rho.begin(), rho.end());
  auto in = [&](std::size_t i) { return rho[i] > vacuum_relative * top; };
  std::vector<double> slope(n), out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) slope[i] = (z[i + 1] - z[i]) / dx;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in(i)) continue;
    const bool left = i > 0 && in(i - 1);
    const bool right = i + 1 < n && in(i + 1);
    if (left && right) {
      out[i] = (slope[i + 1] - slope[i - 1]) / (2.0 * dx);
    } else if (left) {
      out[i] = (slope[i] - slope[i - 1]) / dx;
    } else if (right) {
      out[i] = (slope[i + 1] - slope[i]) / dx;
    }
  }
  return out;
}

namespace {

StepDiagnostics initial_row(double tv, double min_rho, double max_rho) {
  StepDiagnostics d;
  d.tv = tv;
  d.energy = tv;
  d.min_rho = min_rho;
  d.max_rho = max_rho;
  return d;
}

void fill_certificate(StepDiagnostics& d, const DualCertificate& c) {
  d.max_abs_z = c.max_abs_z;
  d.el_residual = c.residual_el;
  d.complementarity = c.complementarity;
  d.jump_alignment = c.jump_alignment;
}

}  // namespace

FlowTrajectory run_flow(const GridDensity& rho0, double tau, double horizon, const JkoConfig& config) {
  const int steps = step_count_for(tau, horizon);
  JkoConfig cfg = config;
  cfg.tau = tau;
  cfg.validate();

  FlowTrajectory traj;
  traj.tau = tau;
  traj.horizon = horizon;
  traj.densities.push_back(rho0);
  traj.diagnostics.push_back(initial_row(total_variation(rho0), rho0.min_value(), rho0.max_value()));

  const auto& grid = rho0.grid();
  const auto centers = grid.centers();
  for (int k = 1; k <= steps; ++k) {
    const GridDensity& prev = traj.densities.back();
    auto step = jko_step(prev, cfg);

    StepDiagnostics d;
    d.k = k;
    d.t = k * tau;
    d.w2sq_step = step.w2_squared;
    d.tv = step.total_variation;
    d.energy = step.energy;
    d.min_rho = step.rho1.min_value();
    d.max_rho = step.rho1.max_value();
    fill_certificate(d, step.certificate);
    d.iterations = step.iterations_used;
    d.converged = step.converged;

    auto zxx = support_second_derivative(step.rho1.values(), step.certificate.z_values, grid.dx());
    const double top = step.rho1.max_value();
    double e2 = 0.0, g2 = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      if (!(step.rho1[i - 1] > 1e-10 * top && step.rho1[i] > 1e-10 * top && step.rho1[i + 1] > 1e-10 * top)) continue;
      const double r = (centers[i] - step.transport.map_values[i]) + tau * zxx[i];
      e2 += step.rho1[i] * r * r * grid.dx();
      g2 += zxx[i] * zxx[i] * grid.dx();
    }
    d.eulerk2_residual = std::sqrt(e2);
    d.grad_div_z_l2 = g2;

    traj.sum_w2sq += step.w2_squared;
    traj.integrated_grad_div_z += tau * g2;
    traj.densities.push_back(std::move(step.rho1));
    traj.z_second_derivative.push_back(std::move(zxx));
    traj.diagnostics.push_back(d);
    if (!step.converged) {
      traj.failure = "step " + std::to_string(k) + " did not converge (residual " +
                     std::to_string(step.certificate.residual_el) + ")";
      return traj;
    }
  }
  traj.completed = true;
  return traj;
}

const GridDensity& interpolate(const FlowTrajectory& traj, double t) {
  if (!(t >= 0.0 && t <= traj.horizon * (1.0 + 1e-12))) {
    throw std::invalid_argument("interpolate: t outside [0, horizon]");
  }
  if (t == 0.0) return traj.densities.front();
  const double s = t / traj.tau;
  int k = static_cast<int>(std::ceil(s - 1e-9));
  k = std::clamp(k, 1, traj.step_count());
  return traj.densities[static_cast<std::size_t>(k)];
}

std::vector<TestFunction> default_test_family(const GridSpec& grid, double horizon) {
  std::vector<TestFunction> family;
  const double a = grid.left(), len = grid.length(), T = horizon;
  for (int p = 0; p < 2; ++p) {
    // (1 - s)^3 s^p expanded for the exact primitive in s = t / T.
    auto time = [=](double t) {
      const double s = t / T;
      return std::pow(1.0 - s, 3) * std::pow(s, p);
    };
    auto time_primitive = [=](double t) {
      const double s = t / T;
      const double q = p == 0 ? s - 1.5 * s * s + s * s * s - 0.25 * std::pow(s, 4)
                              : 0.5 * s * s - s * s * s + 0.75 * std::pow(s, 4) - 0.2 * std::pow(s, 5);
      return T * q;
    };
    for (int q = 0; q < 5; ++q) {
      auto space = [=](double x) {
        const double s = (x - a) / len;
        return std::pow(s * (1.0 - s), 3) * std::pow(s, q);
      };
      auto space_derivative = [=](double x) {
        const double s = (x - a) / len;
        // d/ds [s^(3+q) (1-s)^3]
        const double ds = (3.0 + q) * std::pow(s, 2 + q) * std::pow(1.0 - s, 3) -
                          3.0 * std::pow(s, 3 + q) * std::pow(1.0 - s, 2);
        return ds / len;
      };
      family.push_back({"t" + std::to_string(p) + "_x" + std::to_string(q), time, time_primitive, space,
                        space_derivative});
    }
  }
  return family;
}

double weak_solution_residual(const FlowTrajectory& traj, const std::vector<TestFunction>& family) {
  if (traj.step_count() < 1) throw std::invalid_argument("weak_solution_residual: empty trajectory");
  const auto& grid = traj.densities.front().grid();
  const auto centers = grid.centers();
  const double T = traj.horizon, dx = grid.dx();
  const double scale = std::max(1.0, std::abs(grid.left()) + std::abs(grid.right()));
  double worst = 0.0;
  for (const auto& u : family) {
    if (std::abs(u.time(T)) > 1e-12 || std::abs(u.space(grid.left())) > 1e-12 * scale ||
        std::abs(u.space(grid.right())) > 1e-12 * scale) {
      throw std::invalid_argument("weak_solution_residual: test function " + u.name +
                                  " must vanish at t = T and on the boundary");
    }
    std::vector<double> b(grid.size()), db(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      b[i] = u.space(centers[i]);
      db[i] = u.space_derivative(centers[i]);
    }
    double r = 0.0;
    for (int k = 0; k < traj.step_count(); ++k) {
      const double t0 = k * traj.tau;
      const double t1 = std::min((k + 1) * traj.tau, T);
      const auto& rho = traj.densities[static_cast<std::size_t>(k + 1)];
      const auto& zxx = traj.z_second_derivative[static_cast<std::size_t>(k)];
      double mass_b = 0.0, flux = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        mass_b += b[i] * rho[i] * dx;
        flux += rho[i] * zxx[i] * db[i] * dx;
      }
      r += (u.time(t1) - u.time(t0)) * mass_b - (u.time_primitive(t1) - u.time_primitive(t0)) * flux;
    }
    // Remaining time after the last full step carries no density update.
    const double t_end = traj.step_count() * traj.tau;
    if (t_end < T) {
      const auto& rho = traj.densities.back();
      const auto& zxx = traj.z_second_derivative.back();
      double mass_b = 0.0, flux = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        mass_b += b[i] * rho[i] * dx;
        flux += rho[i] * zxx[i] * db[i] * dx;
      }
      r += (u.time(T) - u.time(t_end)) * mass_b - (u.time_primitive(T) - u.time_primitive(t_end)) * flux;
    }
    double init = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) init += b[i] * traj.densities[1][i] * dx;
    r += u.time(0.0) * init;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double weak_solution_residual(const FlowTrajectory& traj) {
  return weak_solution_residual(traj, default_test_family(traj.densities.front().grid(), traj.horizon));
}

void write_trajectory_csv(const std::string& path, const FlowTrajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << std::setprecision(17) << "k,t,x,rho\n";
  for (std::size_t k = 0; k < traj.densities.size(); ++k) {
    const auto& rho = traj.densities[k];
    for (std::size_t i = 0; i < rho.size(); ++i) {
      out << k << ',' << k * traj.tau << ',' << rho.grid().center(i) << ',' << rho[i] << '\n';
    }
  }
}

void write_diagnostics_csv(const std::string& path, const std::vector<StepDiagnostics>& diagnostics) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << std::setprecision(17)
      << "k,t,w2sq_step,tv,energy,min_rho,max_rho,max_abs_z,el_residual,complementarity,eulerk2_residual\n";
  for (const auto& d : diagnostics) {
    out << d.k << ',' << d.t << ',' << d.w2sq_step << ',' << d.tv << ',' << d.energy << ',' << d.min_rho << ','
        << d.max_rho << ',' << d.max_abs_z << ',' << d.el_residual << ',' << d.complementarity << ','
        << d.eulerk2_residual << '\n';
  }
}

RadialTrajectory run_radial_flow(const RadialDensity& rho0, double tau, double horizon, const JkoConfig& config) {
  const int steps = step_count_for(tau, horizon);
  JkoConfig cfg = config;
  cfg.tau = tau;
  cfg.validate();
  RadialTrajectory traj;
  traj.tau = tau;
  traj.horizon = horizon;
  traj.densities.push_back(rho0);
  traj.diagnostics.push_back(initial_row(weighted_total_variation(rho0), rho0.min_value(), rho0.max_value()));
  for (int k = 1; k <= steps; ++k) {
    auto step = radial_jko_step(traj.densities.back(), cfg);
    StepDiagnostics d;
    d.k = k;
    d.t = k * tau;
    d.w2sq_step = step.w2_squared;
    d.tv = step.weighted_tv;
    d.energy = step.energy;
    d.min_rho = step.rho1.min_value();
    d.max_rho = step.rho1.max_value();
    fill_certificate(d, step.certificate);
    d.iterations = step.iterations_used;
    d.converged = step.converged;
    traj.sum_w2sq += step.w2_squared;
    traj.densities.push_back(std::move(step.rho1));
    traj.diagnostics.push_back(d);
    if (!step.converged) {
      traj.failure = "step " + std::to_string(k) + " did not converge (residual " +
                     std::to_string(step.certificate.residual_el) + ")";
      return traj;
    }
  }
  traj.completed = true;
  return traj;
}

void write_radial_trajectory_csv(const std::string& path, const RadialTrajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << std::setprecision(17) << "k,t,r,rho\n";
  for (std::size_t k = 0; k < traj.densities.size(); ++k) {
    const auto& rho = traj.densities[k];
    for (std::size_t i = 0; i < rho.size(); ++i) {
      out << k << ',' << k * traj.tau << ',' << rho.grid().center(i) << ',' << rho[i] << '\n';
    }
  }
}

}  // namespace tvjko
