#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tvjko/oracles.hpp"
#include "tvjko/tv_prox.hpp"

using namespace tvjko;

namespace {

double objective(const ProxProblem& p, const std::vector<double>& u) {
  double f = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) f += 0.5 * (u[i] - p.input[i]) * (u[i] - p.input[i]);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double w = p.weights ? (*p.weights)[i] : 1.0;
    f += p.lambda * w * std::abs(u[i + 1] - u[i]);
  }
  return f;
}

}  // namespace

TEST_CASE("constant input is a fixed point") {
  ProxProblem p{std::vector<double>(9, 0.7), 3.0, std::nullopt};
  for (double v : tv_prox(p)) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("unit step shrinks by 2 lambda / N") {
  const std::size_t n = 10;
  ProxProblem p;
  p.input.assign(n, 0.0);
  std::fill(p.input.begin() + n / 2, p.input.end(), 1.0);
  p.lambda = 0.1;
  const auto u = tv_prox(p);
  const double c = 2.0 * p.lambda / n;
  for (std::size_t i = 0; i < n; ++i) CHECK(u[i] == doctest::Approx(i < n / 2 ? c : 1.0 - c));
}

TEST_CASE("direct prox agrees with the dual QP") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    ProxProblem p;
    p.input.resize(2 + static_cast<std::size_t>(u(rng) * 15));
    for (double& v : p.input) v = 2.0 * u(rng) - 1.0;
    p.lambda = 0.01 + u(rng);
    if (k % 2) {
      std::vector<double> w(p.input.size() - 1);
      for (double& v : w) v = 0.5 + 1.5 * u(rng);
      p.weights = w;
    }
    const auto a = tv_prox(p);
    const auto b = oracles::tv_prox_qp(p);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-8);
  }
}

TEST_CASE("prox is nonexpansive, optimal and bounded by the data") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    ProxProblem p1, p2;
    p1.input.resize(40);
    p2.input.resize(40);
    for (std::size_t i = 0; i < 40; ++i) {
      p1.input[i] = g(rng);
      p2.input[i] = p1.input[i] + 0.3 * g(rng);
    }
    p1.lambda = p2.lambda = 0.4;
    const auto a = tv_prox(p1);
    const auto b = tv_prox(p2);
    double din = 0.0, dout = 0.0;
    for (std::size_t i = 0; i < 40; ++i) {
      din += (p1.input[i] - p2.input[i]) * (p1.input[i] - p2.input[i]);
      dout += (a[i] - b[i]) * (a[i] - b[i]);
    }
    CHECK(dout <= din + 1e-12);
    const double lo = *std::min_element(p1.input.begin(), p1.input.end());
    const double hi = *std::max_element(p1.input.begin(), p1.input.end());
    for (double v : a) CHECK((v >= lo - 1e-12 && v <= hi + 1e-12));
    const double f = objective(p1, a);
    for (int d = 0; d < 50; ++d) {
      auto q = a;
      for (double& v : q) v += 1e-4 * g(rng);
      CHECK(objective(p1, q) >= f - 1e-14);
    }
  }
}
