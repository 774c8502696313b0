#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tvjko/analytic_reference.hpp"

using namespace tvjko;

TEST_CASE("box half-width recursion") {
  const double a1 = uniform_alpha_next(1.0, 1.0 / 3.0);
  CHECK(a1 * a1 * (a1 - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a1 > 1.0);
  const auto ev = UniformEvolution::build(1.0, 0.01, 100);
  REQUIRE(ev.alphas.size() == 101);
  for (std::size_t k = 1; k < ev.alphas.size(); ++k) CHECK(ev.alphas[k] > ev.alphas[k - 1]);
  CHECK(ev.closed_form(1.0) == doctest::Approx(std::cbrt(10.0)));
  CHECK(std::abs(ev.alphas.back() - ev.closed_form(1.0)) < 5e-3);
}

TEST_CASE("hat plateau relation") {
  CHECK(hat_tau_of_beta(0.5) == doctest::Approx(1.0 / 270.0).epsilon(1e-12));
  for (double beta : {0.1, 0.3, 0.5, 0.7}) CHECK(hat_beta_of_tau(hat_tau_of_beta(beta)) == doctest::Approx(beta).epsilon(1e-10));
  double prev = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double t = hat_tau_of_beta(k / 100.0);
    CHECK(t > prev);
    prev = t;
  }
  CHECK_THROWS_AS(hat_beta_of_tau(0.2), std::invalid_argument);
}

TEST_CASE("analytic pairs are consistent") {
  const GridSpec g(-2.0, 2.0, 2048);
  const auto hat = analytic_profiles(HatProfile{1.0 / 270.0}, g);
  CHECK(hat.jump_location == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(hat.plateau_height == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(hat.rho1.total_mass() == doctest::Approx(1.0));
  CHECK(std::abs(hat.z(0.5) - 1.0) < 1e-12);
  CHECK(std::abs(hat.z(-0.5) + 1.0) < 1e-12);
  const auto z = hat.z_interfaces();
  for (double v : z) CHECK(std::abs(v) <= 1.0 + 1e-12);

  const GridSpec b(-4.0, 4.0, 1024);
  const auto box = analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, b);
  CHECK(box_half_width(box.rho1) == doctest::Approx(box.jump_location).epsilon(1e-12));
  CHECK(box_half_width(box.rho0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, GridSpec(-1.2, 1.2, 64)), std::invalid_argument);
}
