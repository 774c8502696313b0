#include "tvjko/tv_prox.hpp"

#include <cmath>
#include <stdexcept>

namespace tvjko {

void tv_prox_thresholds(std::span<const double> y, std::span<const double> thresholds,
                        std::span<double> out) {
  const std::size_t n = y.size();
  if (out.size() != n) throw std::invalid_argument("tv_prox: output size mismatch");
  if (n == 0) return;
  if (n == 1) {
    out[0] = y[0];
    return;
  }
  if (thresholds.size() != n - 1) throw std::invalid_argument("tv_prox: need N-1 thresholds");

  // Knot k of the message derivative sits at x[k]; crossing it left to right
  // adds (a[k], b[k]) to the active linear piece a*x + b.
  std::vector<double> x(2 * n), a(2 * n), b(2 * n);
  std::vector<double> lo_knot(n - 1), hi_knot(n - 1);

  double lam = thresholds[0];
  std::size_t l = n - 1;
  std::size_t r = n;
  lo_knot[0] = y[0] - lam;
  hi_knot[0] = y[0] + lam;
  x[l] = lo_knot[0];
  x[r] = hi_knot[0];
  a[l] = 1.0;
  b[l] = -y[0] + lam;
  a[r] = -1.0;
  b[r] = y[0] + lam;
  double a_first = 1.0, b_first = -lam - y[1];
  double a_last = -1.0, b_last = -lam + y[1];

  for (std::size_t k = 1; k + 1 < n; ++k) {
    lam = thresholds[k];
    double a_lo = a_first, b_lo = b_first;
    std::size_t lo = l;
    for (; lo <= r; ++lo) {
      if (a_lo * x[lo] + b_lo > -lam) break;
      a_lo += a[lo];
      b_lo += b[lo];
    }
    double a_hi = a_last, b_hi = b_last;
    std::size_t hi = r;
    for (; hi >= lo; --hi) {
      if (-a_hi * x[hi] - b_hi < lam) break;
      a_hi += a[hi];
      b_hi += b[hi];
    }
    lo_knot[k] = (-lam - b_lo) / a_lo;
    hi_knot[k] = (lam + b_hi) / (-a_hi);
    l = lo - 1;
    r = hi + 1;
    x[l] = lo_knot[k];
    x[r] = hi_knot[k];
    a[l] = a_lo;
    b[l] = b_lo + lam;
    a[r] = a_hi;
    b[r] = b_hi + lam;
    a_first = 1.0;
    b_first = -lam - y[k + 1];
    a_last = -1.0;
    b_last = -lam + y[k + 1];
  }

  // Root of the final message derivative.
  double a_lo = a_first, b_lo = b_first;
  for (std::size_t lo = l; lo <= r; ++lo) {
    if (a_lo * x[lo] + b_lo > 0.0) break;
    a_lo += a[lo];
    b_lo += b[lo];
  }
  out[n - 1] = -b_lo / a_lo;
  for (std::size_t k = n - 1; k-- > 0;) {
    const double next = out[k + 1];
    if (next > hi_knot[k]) {
      out[k] = hi_knot[k];
    } else if (next < lo_knot[k]) {
      out[k] = lo_knot[k];
    } else {
      out[k] = next;
    }
  }
}

std::vector<double> tv_prox(const ProxProblem& problem) {
  const std::size_t n = problem.input.size();
  if (!(problem.lambda > 0.0) || !std::isfinite(problem.lambda)) {
    throw std::invalid_argument("tv_prox: lambda must be positive");
  }
  std::vector<double> thresholds(n > 0 ? n - 1 : 0, problem.lambda);
  if (problem.weights) {
    if (problem.weights->size() + 1 != n) throw std::invalid_argument("tv_prox: need N-1 weights");
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double w = (*problem.weights)[k];
      if (!(w > 0.0)) throw std::invalid_argument("tv_prox: weights must be positive");
      thresholds[k] *= w;
    }
  }
  std::vector<double> out(n);
  tv_prox_thresholds(problem.input, thresholds, out);
  return out;
}

}  // namespace tvjko
