#pragma once

#include <optional>
#include <span>
#include <vector>

namespace tvjko {

/// min_u 1/2 sum (u_i - y_i)^2 + lambda sum_i w_i |u_{i+1} - u_i|
struct ProxProblem {
  std::vector<double> input;
  double lambda = 1.0;
  /// Interface weights, size N-1; unit weights when absent.
  std::optional<std::vector<double>> weights;
};

/// Exact minimizer of the 1D (weighted) TV proximal problem.
///
/// Forward pass keeps the derivative of the partial-minimization message as
/// a sorted list of knots; clamping it to [-lambda w_k, lambda w_k] gives the
/// two back-pointer thresholds of edge k. The backward pass clamps. Linear
/// amortized cost, no iteration tolerance.
std::vector<double> tv_prox(const ProxProblem& problem);

/// Same as tv_prox with per-edge thresholds lambda * w_k already multiplied.
void tv_prox_thresholds(std::span<const double> y, std::span<const double> thresholds,
                        std::span<double> out);

}  // namespace tvjko
