// Compares the OpenMP kernels with their serial references.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "tvjko/oracles.hpp"
#include "tvjko/parallel.hpp"

namespace {

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-22s serial %8.4f s  parallel %8.4f s  speedup %5.2f  identical %s\n", name, serial, parallel,
              serial / parallel, identical ? "yes" : "no");
}

}  // namespace

int main() {
  using namespace tvjko;
  std::printf("threads: %d\n", parallel::max_threads());
  std::mt19937_64 rng(7);

  const GridSpec grid(0.0, 1.0, 512);
  const CdfFunction f0(random_density(grid, rng));
  const CdfFunction f1(random_density(grid, rng));
  const std::size_t samples = 4000000;
  auto term = [&](std::size_t k) {
    const double s = (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
    const double d = f0.quantile(s) - f1.quantile(s);
    return d * d;
  };
  double a = 0.0, b = 0.0;
  const double ts = seconds([&] { a = parallel::chunked_sum_serial(samples, term); });
  const double tp = seconds([&] { b = parallel::chunked_sum(samples, term); });
  row("quantile quadrature", ts, tp, a == b);

  std::vector<GridDensity> densities;
  for (int k = 0; k < 48; ++k) densities.push_back(random_density(GridSpec(0.0, 1.0, 2048), rng));
  std::vector<double> ms, mp;
  const double ws = seconds([&] { ms = parallel::w2_matrix_serial(densities); });
  const double wp = seconds([&] { mp = parallel::w2_matrix(densities); });
  row("w2 matrix", ws, wp, ms == mp);

  std::vector<ProxProblem> problems(256);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& p : problems) {
    p.input.resize(20000);
    for (double& v : p.input) v = unit(rng);
    p.lambda = 0.05;
  }
  std::vector<std::vector<double>> ps, pp;
  const double ps_t = seconds([&] { ps = parallel::tv_prox_batch_serial(problems); });
  const double pp_t = seconds([&] { pp = parallel::tv_prox_batch(problems); });
  row("tv prox batch", ps_t, pp_t, ps == pp);
  return 0;
}
