#include "tvjko/grid_density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tvjko {

GridSpec::GridSpec(double left, double right, std::size_t n_cells)
    : left_(left), right_(right), n_(n_cells), dx_(0.0) {
  if (!std::isfinite(left) || !std::isfinite(right) || !(right > left)) {
    throw std::invalid_argument("GridSpec: need finite left < right");
  }
  if (n_cells < 2) {
    throw std::invalid_argument("GridSpec: need at least 2 cells");
  }
  dx_ = (right - left) / static_cast<double>(n_cells);
}

double GridSpec::center(std::size_t i) const {
  return left_ + (static_cast<double>(i) + 0.5) * dx_;
}

double GridSpec::interface(std::size_t j) const {
  if (j == n_) return right_;
  return left_ + static_cast<double>(j) * dx_;
}

std::vector<double> GridSpec::centers() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = center(i);
  return x;
}

std::vector<double> GridSpec::interfaces() const {
  std::vector<double> x(n_ + 1);
  for (std::size_t j = 0; j <= n_; ++j) x[j] = interface(j);
  return x;
}

std::size_t GridSpec::cell_of(double x) const {
  const double t = std::floor((x - left_) / dx_);
  if (t <= 0.0) return 0;
  return std::min(n_ - 1, static_cast<std::size_t>(t));
}

bool GridSpec::operator==(const GridSpec& other) const {
  return left_ == other.left_ && right_ == other.right_ && n_ == other.n_;
}

GridDensity::GridDensity(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("GridDensity: expected " + std::to_string(grid_.size()) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw std::invalid_argument("GridDensity: negative or non-finite value at cell " +
                                  std::to_string(i));
    }
  }
  const double m = std::accumulate(values_.begin(), values_.end(), 0.0) * grid_.dx();
  if (std::abs(m - 1.0) > kMassTolerance) {
    throw std::invalid_argument("GridDensity: total mass " + std::to_string(m) +
                                " deviates from 1 by more than 1e-6");
  }
  renorm_factor_ = 1.0 / m;
  for (double& v : values_) v *= renorm_factor_;
}

GridDensity GridDensity::normalized(GridSpec grid, std::vector<double> values) {
  const double m = std::accumulate(values.begin(), values.end(), 0.0) * grid.dx();
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw std::invalid_argument("GridDensity::normalized: mass must be positive");
  }
  for (double& v : values) v /= m;
  return GridDensity(grid, std::move(values));
}

GridDensity GridDensity::from_antiderivative(GridSpec grid,
                                             const std::function<double(double)>& cumulative) {
  std::vector<double> values(grid.size());
  double prev = cumulative(grid.interface(0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double next = cumulative(grid.interface(i + 1));
    values[i] = std::max(0.0, (next - prev) / grid.dx());
    prev = next;
  }
  return GridDensity(grid, std::move(values));
}

GridDensity GridDensity::uniform(GridSpec grid) {
  return GridDensity(grid, std::vector<double>(grid.size(), 1.0 / grid.length()));
}

double GridDensity::total_mass() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) * grid_.dx();
}

double GridDensity::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double GridDensity::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

CdfFunction::CdfFunction(const GridDensity& rho)
    : grid_(rho.grid()), knots_(rho.size() + 1, 0.0), values_(rho.values().begin(), rho.values().end()) {
  double total = 0.0;
  for (double v : values_) total += v;
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    acc += values_[i];
    knots_[i + 1] = std::min(acc / total, 1.0);
  }
}

double CdfFunction::operator()(double x) const {
  if (x <= grid_.left()) return 0.0;
  if (x >= grid_.right()) return 1.0;
  const std::size_t i = grid_.cell_of(x);
  const double f = knots_[i] + values_[i] * (x - grid_.interface(i));
  return std::min(f, knots_[i + 1]);
}

double CdfFunction::quantile(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("quantile: level must lie in [0, 1]");
  }
  const std::size_t n = values_.size();
  if (s == 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (values_[i] > 0.0) return grid_.interface(i);
    }
    return grid_.left();
  }
  // First knot j >= 1 with F_j >= s; then F_{j-1} < s <= F_j.
  const auto it = std::lower_bound(knots_.begin() + 1, knots_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
  if (j > n) return grid_.right();
  const std::size_t i = j - 1;
  const double x = grid_.interface(i) + (s - knots_[i]) / values_[i];
  return std::clamp(x, grid_.interface(i), grid_.interface(j));
}

double total_variation(std::span<const double> values) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) tv += std::abs(values[i + 1] - values[i]);
  return tv;
}

double total_variation(const GridDensity& rho) { return total_variation(rho.values()); }

double weighted_total_variation(std::span<const double> values, std::span<const double> weights) {
  if (weights.size() + 1 != values.size()) {
    throw std::invalid_argument("weighted_total_variation: need N-1 weights");
  }
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    tv += weights[i] * std::abs(values[i + 1] - values[i]);
  }
  return tv;
}

CdfFunction cdf(const GridDensity& rho) { return CdfFunction(rho); }

double quantile(const GridDensity& rho, double s) { return CdfFunction(rho).quantile(s); }

double entropy(const GridDensity& rho) {
  double e = 0.0;
  for (double v : rho.values()) {
    if (v > 0.0) e += v * std::log(v);
  }
  return e * rho.grid().dx();
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("l1_distance: grids differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d * a.grid().dx();
}

}  // namespace tvjko
