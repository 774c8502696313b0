#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "tvjko/analytic_reference.hpp"
#include "tvjko/certificate.hpp"
#include "tvjko/jko_solver.hpp"
#include "tvjko/oracles.hpp"
#include "tvjko/property_suite.hpp"

using namespace tvjko;

TEST_CASE("config validation") {
  JkoConfig c;
  c.tau = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.tau = 0.1;
  c.entropy_h = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.entropy_h = 0.0;
  c.max_outer_iter = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("uniform density on the whole domain is stationary") {
  const auto rho0 = GridDensity::uniform(GridSpec(0.0, 1.0, 128));
  JkoConfig c;
  c.tau = 0.1;
  const auto r = jko_step(rho0, c);
  CHECK(r.converged);
  CHECK(l1_distance(r.rho1, rho0) < 1e-10);
  CHECK(r.w2_squared < 1e-20);
}

TEST_CASE("box step matches the closed form") {
  const GridSpec g(-4.0, 4.0, 512);
  const auto pair = analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, g);
  JkoConfig c;
  c.tau = 1.0 / 3.0;
  const auto r = jko_step(pair.rho0, c);
  CHECK(r.converged);
  CHECK(l1_distance(r.rho1, pair.rho1) <= 3.0 * g.dx());
  CHECK(std::abs(box_half_width(r.rho1) - pair.jump_location) <= 2.0 * g.dx());
  CHECK(r.energy <= jko_energy(pair.rho0, pair.rho0, c.tau) + 1e-12);
  CHECK(r.energy_trace.back() == doctest::Approx(r.energy));
  CHECK(r.certificate.max_abs_z <= 1.0 + 1e-4);
  CHECK(r.certificate.residual_el <= c.el_tolerance);
  const auto sc = check_sufficient_conditions(r.rho1, pair.rho0, c.tau, r.certificate, 1e-4);
  CHECK(sc.all_passed());
}

TEST_CASE("iteration cap is reported as nonconvergence") {
  const GridSpec g(-4.0, 4.0, 256);
  const auto pair = analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, g);
  JkoConfig c;
  c.tau = 1.0 / 3.0;
  c.max_outer_iter = 2;
  const auto r = jko_step(pair.rho0, c);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations_used == 2);
  CHECK(std::abs(r.rho1.total_mass() - 1.0) < 1e-12);
}

TEST_CASE("exact field certifies the analytic box solution") {
  const GridSpec g(-4.0, 4.0, 1024);
  const auto pair = analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, g);
  const auto phi = pair.phi_cell_averages();
  const auto cert = certificate_from_field(pair.rho1, phi, pair.tau, 0.0, pair.z_interfaces());
  CHECK(cert.max_abs_z <= 1.0 + 1e-12);
  CHECK(cert.complementarity <= 1e-6);
}

TEST_CASE("steps preserve bounds and decrease energy") {
  std::mt19937_64 rng(17);
  const GridSpec g(0.0, 1.0, 128);
  for (int k = 0; k < 4; ++k) {
    const auto rho0 = random_density(g, rng);
    JkoConfig c;
    c.tau = k % 2 ? 1e-2 : 1e-1;
    const auto r = jko_step(rho0, c);
    CHECK(r.converged);
    const double eps = grid_slack(c.el_tolerance, rho0.max_value(), g.dx());
    CHECK(r.rho1.max_value() <= rho0.max_value() + eps);
    CHECK(r.energy <= jko_energy(rho0, rho0, c.tau) + 1e-12);
    CHECK(r.total_variation <= total_variation(rho0) + 1e-12);
    for (std::size_t i = 1; i < r.energy_trace.size(); ++i) {
      CHECK(r.energy_trace[i] <= r.energy_trace[i - 1] + 1e-10 * (1.0 + std::abs(r.energy_trace[i - 1])));
    }
  }
}

TEST_CASE("entropic family approaches the unregularized step") {
  const GridSpec g(-2.0, 2.0, 256);
  const auto rho0 = GridDensity::normalized(g, [&] {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = 0.05 + (std::abs(g.center(i)) < 0.5 ? 0.5 : 0.0);
    return v;
  }());
  JkoConfig c;
  c.tau = 0.1;
  const auto plain = jko_step(rho0, c);
  REQUIRE(plain.converged);
  const auto family = entropic_step_family(rho0, 0.1, {1e-1, 1e-2, 1e-3}, c);
  double prev = 1e300;
  for (const auto& f : family) {
    CHECK(f.step.converged);
    CHECK(std::isfinite(f.min_h_log_rho));
    const double gap = l1_distance(f.step.rho1, plain.rho1);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK_THROWS_AS(entropic_step_family(rho0, 0.1, {1e-2, 1e-1}, c), std::invalid_argument);
}
