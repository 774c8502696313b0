#include "tvjko/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tvjko {

namespace {

struct Structure {
  std::vector<bool> support;
  // Forced z at interfaces: +1, -1 or 0; `fixed` marks forced interfaces.
  std::vector<bool> fixed;
  std::vector<double> forced;
  std::vector<double> jump_sign;
  double vacuum_level = 0.0;
  double reference_weight = 0.0;
};

Structure analyse(std::span<const double> rho, const CertificateGeometry& geo,
                  const CertificateThresholds& th) {
  const std::size_t n = rho.size();
  Structure s;
  const double rho_max = *std::max_element(rho.begin(), rho.end());
  s.vacuum_level = th.vacuum_relative * rho_max;
  const double jump_level = th.jump_relative * rho_max;
  s.support.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.support[i] = rho[i] > s.vacuum_level;
  s.fixed.assign(n + 1, false);
  s.forced.assign(n + 1, 0.0);
  s.jump_sign.assign(n + 1, 0.0);
  s.fixed[0] = s.fixed[n] = true;
  for (std::size_t j = 1; j < n; ++j) {
    if (!s.support[j - 1] && !s.support[j]) continue;
    const double d = rho[j] - rho[j - 1];
    if (std::abs(d) > jump_level) {
      s.fixed[j] = true;
      s.jump_sign[j] = d > 0.0 ? 1.0 : -1.0;
      s.forced[j] = -s.jump_sign[j];
    }
  }
  const double total = std::accumulate(geo.cell_measure.begin(), geo.cell_measure.end(), 0.0);
  s.reference_weight = 1.0 / total;
  return s;
}

void validate(std::span<const double> rho, std::span<const double> gradient,
              const CertificateGeometry& geo) {
  const std::size_t n = rho.size();
  if (n < 2 || gradient.size() != n || geo.cell_measure.size() != n ||
      geo.interface_weight.size() != n + 1) {
    throw std::invalid_argument("certificate: inconsistent array sizes");
  }
}

double weight_or_one(double w) { return w > 0.0 ? w : 1.0; }

void finalize_metrics(std::span<const double> rho, const CertificateGeometry& geo,
                      const Structure& s, DualCertificate& cert) {
  const std::size_t n = rho.size();
  double res = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = s.support[i] ? rho[i] : s.reference_weight;
    res += w * cert.residual_cells[i] * cert.residual_cells[i] * geo.cell_measure[i];
    comp += cert.beta_values[i] * rho[i] * geo.cell_measure[i];
  }
  cert.residual_el = std::sqrt(res);
  cert.complementarity = comp;
  cert.max_abs_z = 0.0;
  for (double z : cert.z_values) cert.max_abs_z = std::max(cert.max_abs_z, std::abs(z));
}

}  // namespace

CertificateGeometry CertificateGeometry::uniform(const GridSpec& grid) {
  return {std::vector<double>(grid.size(), grid.dx()), std::vector<double>(grid.size() + 1, 1.0)};
}

DualCertificate reconstruct_certificate(std::span<const double> rho, std::span<const double> gradient,
                                        const CertificateGeometry& geo,
                                        const CertificateThresholds& th) {
  validate(rho, gradient, geo);
  const std::size_t n = rho.size();
  const auto& mu = geo.cell_measure;
  const auto& w = geo.interface_weight;
  const Structure s = analyse(rho, geo, th);

  // Segments between consecutive forced interfaces; support segments never
  // mix with vacuum because support/vacuum borders are jumps.
  struct Segment {
    std::size_t p, q;
    bool vacuum;
    double a = 0.0, m = 0.0, wsum = 0.0;
  };
  std::vector<Segment> segs;
  for (std::size_t p = 0; p < n;) {
    std::size_t q = p + 1;
    while (!s.fixed[q]) ++q;
    Segment seg{p, q, !s.support[p]};
    for (std::size_t i = p; i < q; ++i) {
      seg.a += gradient[i] * mu[i];
      seg.m += mu[i];
      if (!seg.vacuum) seg.wsum += mu[i] / rho[i];
    }
    seg.a += w[q] * s.forced[q] - w[p] * s.forced[p];
    segs.push_back(seg);
    p = q;
  }

  double num = 0.0, den = 0.0;
  for (const auto& seg : segs) {
    if (seg.vacuum) continue;
    num += seg.a * seg.m / seg.wsum;
    den += seg.m * seg.m / seg.wsum;
  }
  const double c = den > 0.0 ? -num / den : 0.0;

  DualCertificate cert;
  cert.potential_shift = c;
  cert.z_values.assign(n + 1, 0.0);
  cert.beta_values.assign(n, 0.0);
  cert.stationarity.assign(n, 0.0);
  cert.residual_cells.assign(n, 0.0);
  double alignment = 0.0;

  for (const auto& seg : segs) {
    const double z_start = s.forced[seg.p];
    const double z_end = s.forced[seg.q];
    cert.z_values[seg.p] = z_start;
    cert.z_values[seg.q] = z_end;
    if (!seg.vacuum) {
      const double mismatch = seg.a + c * seg.m;
      double flux = w[seg.p] * z_start;
      for (std::size_t i = seg.p; i < seg.q; ++i) {
        const double r = mismatch / (rho[i] * seg.wsum);
        cert.residual_cells[i] = r;
        cert.stationarity[i] = r;
        flux += (r - gradient[i] - c) * mu[i];
        if (i + 1 < seg.q) cert.z_values[i + 1] = flux / weight_or_one(w[i + 1]);
      }
      if (s.jump_sign[seg.q] != 0.0) alignment = std::max(alignment, std::abs(mismatch) / weight_or_one(w[seg.q]));
      continue;
    }
    // Vacuum: z may only be slowed down (beta >= 0). Try to settle at the
    // closing value first; fall back to the lowest admissible path.
    auto walk = [&](double floor_z, std::vector<double>& path) {
      path.assign(seg.q - seg.p + 1, 0.0);
      double flux = w[seg.p] * z_start;
      path[0] = flux;
      for (std::size_t i = seg.p; i < seg.q; ++i) {
        const double free_flux = flux - (gradient[i] + c) * mu[i];
        const double floor_flux = (i + 1 == seg.q ? z_end : floor_z) * w[i + 1];
        flux = std::max(free_flux, floor_flux);
        path[i + 1 - seg.p] = flux;
      }
      return flux - w[seg.q] * z_end;  // > 0 means z arrives too high
    };
    std::vector<double> path;
    double excess = walk(z_end, path);
    if (excess > 0.0) excess = walk(-1.0, path);
    for (std::size_t i = seg.p; i < seg.q; ++i) {
      const double flux_in = path[i - seg.p];
      const double flux_out = (i + 1 == seg.q) ? w[seg.q] * z_end : path[i + 1 - seg.p];
      const double lhs = gradient[i] + c + (flux_out - flux_in) / mu[i];
      cert.stationarity[i] = lhs;
      cert.beta_values[i] = std::max(lhs, 0.0);
      cert.residual_cells[i] = lhs - cert.beta_values[i];
      if (i + 1 < seg.q) cert.z_values[i + 1] = flux_out / weight_or_one(w[i + 1]);
    }
    if (excess > 0.0 && s.jump_sign[seg.q] != 0.0) {
      alignment = std::max(alignment, excess / weight_or_one(w[seg.q]));
    }
  }
  cert.jump_alignment = alignment;
  finalize_metrics(rho, geo, s, cert);
  return cert;
}

DualCertificate certificate_from_field(std::span<const double> rho, std::span<const double> gradient,
                                       std::span<const double> z_values,
                                       const CertificateGeometry& geo,
                                       const CertificateThresholds& th) {
  validate(rho, gradient, geo);
  const std::size_t n = rho.size();
  if (z_values.size() != n + 1) throw std::invalid_argument("certificate: need N+1 z values");
  const Structure s = analyse(rho, geo, th);
  DualCertificate cert;
  cert.z_values.assign(z_values.begin(), z_values.end());
  cert.beta_values.assign(n, 0.0);
  cert.stationarity.assign(n, 0.0);
  cert.residual_cells.assign(n, 0.0);
  const auto& w = geo.interface_weight;
  for (std::size_t i = 0; i < n; ++i) {
    const double lhs = gradient[i] + (w[i + 1] * z_values[i + 1] - w[i] * z_values[i]) / geo.cell_measure[i];
    cert.stationarity[i] = lhs;
    cert.beta_values[i] = s.support[i] ? 0.0 : std::max(lhs, 0.0);
    cert.residual_cells[i] = lhs - cert.beta_values[i];
  }
  double alignment = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    if (s.jump_sign[j] != 0.0) alignment = std::max(alignment, std::abs(z_values[j] + s.jump_sign[j]));
  }
  cert.jump_alignment = alignment;
  finalize_metrics(rho, geo, s, cert);
  return cert;
}

std::vector<double> step_gradient(const GridDensity& rho1, std::span<const double> phi, double tau,
                                  double entropy_h, double log_floor) {
  if (phi.size() != rho1.size()) throw std::invalid_argument("step_gradient: size mismatch");
  std::vector<double> g(phi.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = phi[i] / tau;
    if (entropy_h > 0.0) g[i] += entropy_h * std::log(std::max(rho1[i], log_floor));
  }
  return g;
}

DualCertificate build_certificate(const GridDensity& rho1, std::span<const double> phi, double tau,
                                  double entropy_h) {
  const auto g = step_gradient(rho1, phi, tau, entropy_h);
  return reconstruct_certificate(rho1.values(), g, CertificateGeometry::uniform(rho1.grid()));
}

DualCertificate certificate_from_field(const GridDensity& rho1, std::span<const double> phi,
                                       double tau, double entropy_h,
                                       std::span<const double> z_values) {
  const auto g = step_gradient(rho1, phi, tau, entropy_h);
  return certificate_from_field(rho1.values(), g, z_values, CertificateGeometry::uniform(rho1.grid()));
}

SufficientConditionsReport check_sufficient_conditions(const GridDensity& rho1, const GridDensity& rho0,
                                                       double tau, const DualCertificate& cert,
                                                       double tol,
                                                       const CertificateThresholds& th) {
  if (!(rho1.grid() == rho0.grid())) throw std::invalid_argument("check: grids differ");
  if (!(tau > 0.0)) throw std::invalid_argument("check: tau must be positive");
  const std::size_t n = rho1.size();
  if (cert.stationarity.size() != n || cert.z_values.size() != n + 1) {
    throw std::invalid_argument("check: certificate does not match grid");
  }
  const double vacuum = th.vacuum_relative * rho1.max_value();
  SufficientConditionsReport rep;
  double min_lhs = std::numeric_limits<double>::infinity();
  double max_support = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    min_lhs = std::min(min_lhs, cert.stationarity[i]);
    if (rho1[i] > vacuum) max_support = std::max(max_support, std::abs(cert.stationarity[i]));
  }
  rep.inequality = {min_lhs >= -tol, min_lhs};
  rep.equality_on_support = {max_support <= tol, max_support};
  const double excess = std::max(cert.max_abs_z - 1.0, cert.jump_alignment);
  rep.field_bound = {cert.max_abs_z <= 1.0 + tol && cert.jump_alignment <= tol, excess};
  return rep;
}

void write_certificate_csv(const std::string& z_path, const std::string& cell_path,
                           const GridSpec& grid, const DualCertificate& cert) {
  std::ofstream zo(z_path);
  std::ofstream co(cell_path);
  if (!zo || !co) throw std::runtime_error("cannot write certificate files");
  zo.precision(17);
  co.precision(17);
  zo << "x_interface,z\n";
  for (std::size_t j = 0; j <= grid.size(); ++j) zo << grid.interface(j) << ',' << cert.z_values[j] << '\n';
  co << "x_center,beta,residual_cell\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    co << grid.center(i) << ',' << cert.beta_values[i] << ',' << cert.residual_cells[i] << '\n';
  }
}

}  // namespace tvjko
