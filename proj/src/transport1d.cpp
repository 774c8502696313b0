#include "tvjko/transport1d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace tvjko {

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("transport: densities live on different grids");
}

std::vector<double> prefix_masses(const GridSpec& grid, std::span<const double> rho) {
  // Dividing by the sum itself (rather than pinning the last knot) keeps
  // roundoff from inventing mass in the last cell.
  (void)grid;
  std::vector<double> c(rho.size() + 1, 0.0);
  double total = 0.0;
  for (double v : rho) total += v;
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    acc += rho[i];
    c[i + 1] = std::min(acc / total, 1.0);
  }
  return c;
}

// Linear piece of a quantile function: Q(s) = x0 + (s - s0) * slope on [s0, s1].
struct Piece {
  double s0;
  double s1;
  double x0;
  double slope;
  double at(double s) const { return x0 + (s - s0) * slope; }
};

std::vector<Piece> quantile_pieces(const GridSpec& grid, const std::vector<double>& knots) {
  std::vector<Piece> pieces;
  pieces.reserve(knots.size());
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double m = knots[i + 1] - knots[i];
    if (m > 0.0) pieces.push_back({knots[i], knots[i + 1], grid.interface(i), grid.dx() / m});
  }
  if (pieces.empty()) throw std::invalid_argument("transport: density has no mass");
  return pieces;
}

// Left-continuous generalized inverse on the piece list; level 0 maps to the
// left end of the support.
double quantile_at(const std::vector<Piece>& pieces, double s) {
  if (s <= pieces.front().s0) return pieces.front().x0;
  auto it = std::lower_bound(pieces.begin(), pieces.end(), s,
                             [](const Piece& p, double v) { return p.s1 < v; });
  if (it == pieces.end()) it = std::prev(pieces.end());
  return it->at(std::min(s, it->s1));
}

}  // namespace

namespace kernels {

double w2_squared(const GridSpec& grid, std::span<const double> rho0, std::span<const double> rho1) {
  const auto a = quantile_pieces(grid, prefix_masses(grid, rho0));
  const auto b = quantile_pieces(grid, prefix_masses(grid, rho1));
  std::size_t i = 0;
  std::size_t j = 0;
  double cur = 0.0;
  double acc = 0.0;
  while (i < a.size() && j < b.size()) {
    const double end = std::min(a[i].s1, b[j].s1);
    if (end > cur) {
      const double dl = a[i].at(cur) - b[j].at(cur);
      const double dr = a[i].at(end) - b[j].at(end);
      acc += (end - cur) * (dl * dl + dl * dr + dr * dr) / 3.0;
      cur = end;
    }
    if (a[i].s1 <= end) ++i;
    if (b[j].s1 <= end) ++j;
  }
  return acc;
}

std::vector<double> potential(const GridSpec& grid, std::span<const double> rho1,
                              std::span<const double> rho0) {
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const auto c1 = prefix_masses(grid, rho1);
  const auto target = quantile_pieces(grid, prefix_masses(grid, rho0));

  std::vector<double> phi(n);
  double phi_left = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xl = grid.interface(i);
    const double xr = xl + dx;
    const double s_begin = c1[i];
    const double s_end = c1[i + 1];
    double moment = 0.0;  // int_{xl}^{xr} (xr - y) f(y) dy
    double flux = 0.0;    // int_{xl}^{xr} f(y) dy, f = id - T
    auto add_piece = [&](double p, double q, double fp, double fq) {
      const double h = q - p;
      const double fm = 0.5 * (fp + fq);
      const double m = 0.5 * (p + q);
      moment += h / 6.0 * ((xr - p) * fp + 4.0 * (xr - m) * fm + (xr - q) * fq);
      flux += 0.5 * h * (fp + fq);
    };
    const double mass = s_end - s_begin;
    if (!(mass > 0.0)) {
      const double t = quantile_at(target, s_begin);
      add_piece(xl, xr, xl - t, xr - t);
    } else {
      const double scale = dx / mass;
      double s = s_begin;
      while (j + 1 < target.size() && target[j].s1 <= s) ++j;
      while (true) {
        const Piece& pc = target[j];
        const double s_next = (j + 1 < target.size()) ? std::min(s_end, pc.s1) : s_end;
        const double p = xl + (s - s_begin) * scale;
        const double q = (s_next >= s_end) ? xr : xl + (s_next - s_begin) * scale;
        const double tp = pc.at(s);
        const double tq = pc.at(s_next);
        if (q > p) add_piece(p, q, p - tp, q - tq);
        if (s_next >= s_end) break;
        s = s_next;
        ++j;
      }
    }
    phi[i] = phi_left + moment / dx;
    phi_left += flux;
  }
  double mean = 0.0;
  for (double v : phi) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : phi) v -= mean;
  return phi;
}

}  // namespace kernels

double w2_squared(const GridDensity& rho0, const GridDensity& rho1) {
  require_same_grid(rho0.grid(), rho1.grid());
  return kernels::w2_squared(rho0.grid(), rho0.values(), rho1.values());
}

std::vector<double> monotone_map(const GridDensity& rho1, const GridDensity& rho0) {
  require_same_grid(rho0.grid(), rho1.grid());
  const CdfFunction f1(rho1);
  const CdfFunction f0(rho0);
  const auto& grid = rho1.grid();
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) t[i] = f0.quantile(f1(grid.center(i)));
  return t;
}

std::vector<double> kantorovich_potential(const GridDensity& rho1, const GridDensity& rho0) {
  require_same_grid(rho0.grid(), rho1.grid());
  return kernels::potential(rho1.grid(), rho1.values(), rho0.values());
}

TransportData compute_transport(const GridDensity& rho1, const GridDensity& rho0) {
  TransportData data;
  data.w2_squared = w2_squared(rho0, rho1);
  data.map_values = monotone_map(rho1, rho0);
  data.potential = kantorovich_potential(rho1, rho0);
  return data;
}

void write_transport_csv(const std::string& path, const GridSpec& grid, const TransportData& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "x,T,phi\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << grid.center(i) << ',' << data.map_values[i] << ',' << data.potential[i] << '\n';
  }
}

}  // namespace tvjko
