#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tvjko/analytic_reference.hpp"
#include "tvjko/flow_driver.hpp"

using namespace tvjko;

TEST_CASE("step counts are robust to rounding") {
  CHECK(step_count_for(0.1, 0.3) == 3);
  CHECK(step_count_for(0.01, 1.0) == 100);
  CHECK(step_count_for(0.3, 1.0) == 3);
  CHECK_THROWS_AS(step_count_for(0.5, 0.1), std::invalid_argument);
}

TEST_CASE("uniform density is a stationary flow") {
  const auto rho0 = GridDensity::uniform(GridSpec(0.0, 1.0, 64));
  JkoConfig c;
  c.tau = 0.05;
  const auto traj = run_flow(rho0, 0.05, 0.2, c);
  REQUIRE(traj.completed);
  CHECK(traj.step_count() == 4);
  for (const auto& rho : traj.densities) CHECK(l1_distance(rho, rho0) < 1e-10);
  CHECK(traj.sum_w2sq < 1e-20);
}

TEST_CASE("piecewise constant interpolation") {
  const GridSpec g(-4.0, 4.0, 256);
  const auto rho0 = analytic_profiles(UniformProfile{1.0, 0.1}, g).rho0;
  JkoConfig c;
  c.tau = 0.1;
  const auto traj = run_flow(rho0, 0.1, 0.3, c);
  REQUIRE(traj.completed);
  CHECK(&interpolate(traj, 0.0) == &traj.densities[0]);
  CHECK(&interpolate(traj, 0.05) == &traj.densities[1]);
  CHECK(&interpolate(traj, 0.1) == &traj.densities[1]);
  CHECK(&interpolate(traj, 0.15) == &traj.densities[2]);
  CHECK(&interpolate(traj, 0.3) == &traj.densities[3]);
  // Dissipation identity bound and monotone total variation.
  CHECK(traj.sum_w2sq / (2.0 * traj.tau) <= total_variation(rho0) + 1e-12);
  for (std::size_t k = 1; k < traj.densities.size(); ++k) {
    CHECK(total_variation(traj.densities[k]) <= total_variation(traj.densities[k - 1]) + 1e-12);
  }
  const auto ev = UniformEvolution::build(1.0, 0.1, 3);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(box_half_width(traj.densities[k]) - ev.alphas[k]) <= 2.0 * g.dx());
  CHECK(std::isfinite(weak_solution_residual(traj)));
}

TEST_CASE("support second derivative ignores vacuum") {
  const std::vector<double> rho{0.0, 1.0, 1.0, 1.0, 0.0};
  const std::vector<double> z{0.0, -1.0, -0.75, 0.0, 1.25, 0.0};
  const auto d2 = support_second_derivative(rho, z, 0.5);
  CHECK(d2[0] == 0.0);
  CHECK(d2[4] == 0.0);
  CHECK(d2[1] == doctest::Approx(2.0));
  CHECK(d2[2] == doctest::Approx(2.0));
}
