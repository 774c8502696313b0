#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tvjko {

/// Uniform partition of [left, right] into n_cells cells.
class GridSpec {
 public:
  GridSpec(double left, double right, std::size_t n_cells);

  double left() const { return left_; }
  double right() const { return right_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double length() const { return right_ - left_; }

  /// Center of cell i, a + (i + 1/2) dx.
  double center(std::size_t i) const;
  /// Interface j in 0..N; interface 0 is the left boundary.
  double interface(std::size_t j) const;

  std::vector<double> centers() const;
  std::vector<double> interfaces() const;

  /// Index of the cell containing x (clamped to the grid).
  std::size_t cell_of(double x) const;

  bool operator==(const GridSpec& other) const;

 private:
  double left_;
  double right_;
  std::size_t n_;
  double dx_;
};

/// Piecewise-constant probability density on a GridSpec.
///
/// Values are the density on each cell; masses are values * dx. The
/// constructor accepts values whose total mass is within 1e-6 of one,
/// rescales them to unit mass and records the factor it applied.
class GridDensity {
 public:
  static constexpr double kMassTolerance = 1e-6;

  GridDensity(GridSpec grid, std::vector<double> values);

  /// Rescales arbitrary nonnegative values with positive mass.
  static GridDensity normalized(GridSpec grid, std::vector<double> values);

  /// Exact cell averages of a density given by its antiderivative.
  static GridDensity from_antiderivative(GridSpec grid,
                                         const std::function<double(double)>& cumulative);

  /// Constant density 1/(b - a).
  static GridDensity uniform(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  double mass(std::size_t i) const { return values_[i] * grid_.dx(); }
  double total_mass() const;
  double renormalization_factor() const { return renorm_factor_; }

  double min_value() const;
  double max_value() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
  double renorm_factor_ = 1.0;
};

/// Exact CDF of a piecewise-constant density: piecewise linear, knots at
/// cell interfaces, F(a) = 0 and F(b) = 1.
class CdfFunction {
 public:
  explicit CdfFunction(const GridDensity& rho);

  double operator()(double x) const;
  /// Knot values F(x_{j}), j = 0..N.
  std::span<const double> knots() const { return knots_; }
  const GridSpec& grid() const { return grid_; }

  /// Generalized inverse inf{x : F(x) >= s}; s = 0 maps to the left end of
  /// the support.
  double quantile(double s) const;

 private:
  GridSpec grid_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Discrete total variation: sum of interface jumps, no boundary terms.
double total_variation(std::span<const double> values);
double total_variation(const GridDensity& rho);

/// Interface-weighted variant sum_j w_j |u_{j+1} - u_j|, weights of size N-1.
double weighted_total_variation(std::span<const double> values, std::span<const double> weights);

CdfFunction cdf(const GridDensity& rho);
double quantile(const GridDensity& rho, double s);

/// Entropy sum rho log rho dx with 0 log 0 = 0.
double entropy(const GridDensity& rho);

double l1_distance(const GridDensity& a, const GridDensity& b);

}  // namespace tvjko
