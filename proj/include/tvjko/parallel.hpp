#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tvjko/grid_density.hpp"
#include "tvjko/tv_prox.hpp"

namespace tvjko::parallel {

/// Threads OpenMP will use for the kernels below.
int max_threads();

/// Sum of f(i) for i < n. Partial sums over fixed chunks are added in chunk
/// order, so the result is bitwise identical for every thread count.
double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& f, std::size_t chunk = 8192);
/// Serial reference with the same chunking.
double chunked_sum_serial(std::size_t n, const std::function<double(std::size_t)>& f,
                          std::size_t chunk = 8192);

/// Symmetric matrix of W2^2 between all pairs (row-major, n x n).
std::vector<double> w2_matrix(const std::vector<GridDensity>& densities);
std::vector<double> w2_matrix_serial(const std::vector<GridDensity>& densities);

/// Independent TV proxes.
std::vector<std::vector<double>> tv_prox_batch(const std::vector<ProxProblem>& problems);
std::vector<std::vector<double>> tv_prox_batch_serial(const std::vector<ProxProblem>& problems);

}  // namespace tvjko::parallel
