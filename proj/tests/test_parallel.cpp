#include <doctest.h>

#include <cmath>
#include <random>

#include "tvjko/oracles.hpp"
#include "tvjko/parallel.hpp"
#include "tvjko/transport1d.hpp"

using namespace tvjko;

TEST_CASE("parallel kernels reproduce their serial references exactly") {
  auto f = [](std::size_t i) { return std::sin(0.001 * static_cast<double>(i)); };
  CHECK(parallel::chunked_sum(100000, f) == parallel::chunked_sum_serial(100000, f));

  std::mt19937_64 rng(8);
  const GridSpec g(0.0, 1.0, 64);
  std::vector<GridDensity> ds;
  for (int k = 0; k < 8; ++k) ds.push_back(random_density(g, rng));
  const auto a = parallel::w2_matrix(ds);
  CHECK(a == parallel::w2_matrix_serial(ds));
  CHECK(a[1 * 8 + 2] == w2_squared(ds[1], ds[2]));

  std::vector<ProxProblem> ps;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 16; ++k) {
    ProxProblem p;
    p.input.resize(50);
    for (double& v : p.input) v = n(rng);
    p.lambda = 0.2;
    ps.push_back(p);
  }
  CHECK(parallel::tv_prox_batch(ps) == parallel::tv_prox_batch_serial(ps));
}

TEST_CASE("assignment solver") {
  const std::vector<double> cost{4, 1, 3, 2, 0, 5, 3, 2, 2};
  const auto m = oracles::min_cost_assignment(cost, 3);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += cost[i * 3 + m[i]];
  CHECK(total == doctest::Approx(5.0));
  CHECK(oracles::assignment_w2_squared({0.0, 1.0}, {1.0, 2.0}) == doctest::Approx(1.0));
}

TEST_CASE("oracle families pass on a small seeded run") {
  oracles::OracleCounts counts;
  counts.transport_pairs = 5;
  counts.prox_instances = 10;
  counts.gradient_pairs = 2;
  counts.gradient_directions = 5;
  counts.quadrature_samples = 200000;
  oracles::OracleTolerances tol;
  tol.w2_quadrature_relative = 1e-4;
  for (const auto& o : oracles::run_oracle_checks(7, tol, counts)) {
    INFO(o.name << " deviation " << o.max_deviation);
    CHECK(o.passed);
  }
}
