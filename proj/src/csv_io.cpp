#include "tvjko/csv_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tvjko {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(where + ": cannot parse number '" + t + "'");
  }
  if (used != t.size()) throw std::invalid_argument(where + ": cannot parse number '" + t + "'");
  if (!std::isfinite(v)) throw std::invalid_argument(where + ": non-finite value");
  return v;
}

struct Columns {
  std::vector<double> position;
  std::vector<double> value;
  double spacing = 0.0;
};

// Reads a two-column file with the given header and checks the spacing.
Columns read_columns(const std::string& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw std::invalid_argument(path + ": row 1: expected header '" + header + "'");
  }
  Columns c;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::string where = path + ": row " + std::to_string(row);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw std::invalid_argument(where + ": expected two comma-separated fields");
    }
    const double pos = parse_field(line.substr(0, comma), where);
    const double val = parse_field(line.substr(comma + 1), where);
    if (val < 0.0) throw std::invalid_argument(where + ": negative density " + trim(line.substr(comma + 1)));
    c.position.push_back(pos);
    c.value.push_back(val);
  }
  const std::size_t n = c.position.size();
  if (n < 2) throw std::invalid_argument(path + ": need at least two rows");
  c.spacing = (c.position.back() - c.position.front()) / static_cast<double>(n - 1);
  if (!(c.spacing > 0.0)) throw std::invalid_argument(path + ": positions must be increasing");
  const double length = c.spacing * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = c.position.front() + static_cast<double>(i) * c.spacing;
    if (std::abs(c.position[i] - expected) > 1e-9 * length) {
      throw std::invalid_argument(path + ": row " + std::to_string(i + 2) + ": grid is not uniform");
    }
  }
  return c;
}

}  // namespace

GridDensity read_density_csv(const std::string& path) {
  Columns c = read_columns(path, "x,rho");
  const double half = 0.5 * c.spacing;
  GridSpec grid(c.position.front() - half, c.position.back() + half, c.position.size());
  try {
    return GridDensity(grid, std::move(c.value));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

RadialDensity read_radial_csv(const std::string& path, int dimension) {
  Columns c = read_columns(path, "r,rho");
  const double half = 0.5 * c.spacing;
  if (std::abs(c.position.front() - half) > 1e-9 * c.spacing * static_cast<double>(c.position.size())) {
    throw std::invalid_argument(path + ": row 2: first center must sit at dr/2");
  }
  const double radius = c.position.back() + half;
  try {
    return RadialDensity(dimension, radius, c.position.size(), std::move(c.value));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_density_csv(const std::string& path, const GridDensity& rho) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << std::setprecision(17) << "x,rho\n";
  for (std::size_t i = 0; i < rho.size(); ++i) out << rho.grid().center(i) << ',' << rho[i] << '\n';
}

}  // namespace tvjko
