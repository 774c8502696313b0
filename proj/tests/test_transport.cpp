#include <doctest.h>

#include <cmath>
#include <random>

#include "tvjko/analytic_reference.hpp"
#include "tvjko/oracles.hpp"
#include "tvjko/transport1d.hpp"

using namespace tvjko;

namespace {

GridDensity box(const GridSpec& g, double lo, double hi) {
  return GridDensity::from_antiderivative(g, [=](double x) { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); });
}

}  // namespace

TEST_CASE("w2 reference values") {
  const GridSpec g(0.0, 3.0, 300);
  const auto a = box(g, 0.0, 1.0);
  CHECK(w2_squared(a, a) == 0.0);
  CHECK(w2_squared(a, box(g, 1.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  const GridSpec h(-2.0, 2.0, 400);
  CHECK(w2_squared(box(h, -1.0, 1.0), box(h, -2.0, 2.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("w2 symmetry and triangle inequality") {
  std::mt19937_64 rng(5);
  const GridSpec g(0.0, 1.0, 80);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_density(g, rng);
    const auto b = random_density(g, rng);
    const auto c = random_density(g, rng);
    CHECK(std::abs(w2_squared(a, b) - w2_squared(b, a)) <= 1e-12);
    CHECK(std::sqrt(w2_squared(a, c)) <= std::sqrt(w2_squared(a, b)) + std::sqrt(w2_squared(b, c)) + 1e-12);
  }
}

TEST_CASE("monotone map of the box pair is linear on the support") {
  const GridSpec g(-4.0, 4.0, 1024);
  const double a1 = uniform_alpha_next(1.0, 1.0 / 3.0);
  const auto pair = analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, g);
  const auto t = monotone_map(pair.rho1, pair.rho0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(t[i] >= t[i - 1]);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.center(i);
    if (std::abs(x) < a1 - g.dx()) CHECK(t[i] == doctest::Approx(x / a1).epsilon(1e-6));
  }
  const auto id = monotone_map(pair.rho0, pair.rho0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (pair.rho0[i] > 0.0) CHECK(id[i] == doctest::Approx(g.center(i)));
  }
}

TEST_CASE("potential is zero mean and matches the box closed form") {
  const GridSpec g(-4.0, 4.0, 2048);
  const auto pair = analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, g);
  const auto phi = kantorovich_potential(pair.rho1, pair.rho0);
  double mean = 0.0;
  for (double v : phi) mean += v * g.dx();
  CHECK(std::abs(mean) <= 1e-10);
  // Differences from the center cell remove the additive constant.
  const auto exact = pair.phi_cell_averages();
  const std::size_t mid = g.size() / 2;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g.center(i)) < pair.jump_location - g.dx()) {
      CHECK(std::abs((phi[i] - phi[mid]) - (exact[i] - exact[mid])) <= 1e-5);
    }
  }
  const auto flat = GridDensity::uniform(g);
  for (double v : kantorovich_potential(flat, flat)) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("potential is the first variation of the transport cost") {
  std::mt19937_64 rng(9);
  const GridSpec g(0.0, 1.0, 96);
  ProfileOptions opt;
  opt.floor = 0.3;
  const auto a = random_density(g, rng, opt);
  const auto b = random_density(g, rng, opt);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int d = 0; d < 20; ++d) {
    std::vector<double> mu(g.size());
    double mean = 0.0;
    for (double& v : mu) mean += (v = u(rng));
    for (double& v : mu) v -= mean / static_cast<double>(g.size());
    CHECK(oracles::gradient_relative_error(a, b, mu) <= 1e-4);
  }
}
