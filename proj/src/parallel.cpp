#include "tvjko/parallel.hpp"

#include <omp.h>

#include "tvjko/transport1d.hpp"

namespace tvjko::parallel {

int max_threads() { return omp_get_max_threads(); }

namespace {

double chunk_total(std::size_t c, std::size_t n, std::size_t chunk, const std::function<double(std::size_t)>& f) {
  const std::size_t end = std::min(n, (c + 1) * chunk);
  double s = 0.0;
  for (std::size_t i = c * chunk; i < end; ++i) s += f(i);
  return s;
}

}  // namespace

double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& f, std::size_t chunk) {
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(chunks);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) partial[c] = chunk_total(c, n, chunk, f);
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double chunked_sum_serial(std::size_t n, const std::function<double(std::size_t)>& f, std::size_t chunk) {
  const std::size_t chunks = (n + chunk - 1) / chunk;
  double s = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) s += chunk_total(c, n, chunk, f);
  return s;
}

std::vector<double> w2_matrix(const std::vector<GridDensity>& densities) {
  const std::size_t n = densities.size();
  std::vector<double> m(n * n, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i * n + j] = m[j * n + i] = w2_squared(densities[i], densities[j]);
    }
  }
  return m;
}

std::vector<double> w2_matrix_serial(const std::vector<GridDensity>& densities) {
  const std::size_t n = densities.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i * n + j] = m[j * n + i] = w2_squared(densities[i], densities[j]);
    }
  }
  return m;
}

std::vector<std::vector<double>> tv_prox_batch(const std::vector<ProxProblem>& problems) {
  std::vector<std::vector<double>> out(problems.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < problems.size(); ++i) out[i] = tv_prox(problems[i]);
  return out;
}

std::vector<std::vector<double>> tv_prox_batch_serial(const std::vector<ProxProblem>& problems) {
  std::vector<std::vector<double>> out(problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) out[i] = tv_prox(problems[i]);
  return out;
}

}  // namespace tvjko::parallel
