#pragma once

#include <span>
#include <string>
#include <vector>

#include "tvjko/grid_density.hpp"

namespace tvjko {

/// Dual certificate (z, beta) for one TV-JKO step.
///
/// z lives on the N+1 interfaces with z[0] = z[N] = 0; beta and the
/// per-cell quantities live on cell centers. `stationarity` holds the
/// left-hand side phi/tau + z' (+ h log rho) after the constant shift, so on
/// an exact certificate it equals beta everywhere.
struct DualCertificate {
  std::vector<double> z_values;
  std::vector<double> beta_values;
  std::vector<double> stationarity;
  std::vector<double> residual_cells;
  /// Constant added to the gradient; absorbs the mass multiplier.
  double potential_shift = 0.0;

  double residual_el = 0.0;
  double max_abs_z = 0.0;
  double complementarity = 0.0;
  double jump_alignment = 0.0;
};

/// Cell measures and interface weights of a 1D or radially reduced problem.
///
/// The discrete equation on cell i reads
///   g_i + c + (w_{i+1} z_{i+1} - w_i z_i) / mu_i = beta_i
/// For plain 1D problems mu_i = dx and w_j = 1.
struct CertificateGeometry {
  std::vector<double> cell_measure;
  std::vector<double> interface_weight;

  static CertificateGeometry uniform(const GridSpec& grid);
};

struct CertificateThresholds {
  /// Cells with rho <= vacuum_relative * max rho are vacuum.
  double vacuum_relative = 1e-10;
  /// Interfaces with |rho jump| <= jump_relative * max rho carry no jump.
  double jump_relative = 1e-12;
};

/// Reconstructs (z, beta, c) from a density and its gradient g.
///
/// Interfaces carrying a density jump get z = -sign(jump); domain ends get
/// z = 0. Between two such interfaces on the support z is integrated from
/// the equation, and the unavoidable mismatch at the closing interface is
/// spread over the segment in the rho-weighted least-squares sense. That
/// mismatch (in units of z) is the jump alignment. On vacuum segments beta
/// absorbs the descent of z. The shift c minimizes the total residual.
DualCertificate reconstruct_certificate(std::span<const double> rho, std::span<const double> gradient,
                                        const CertificateGeometry& geometry,
                                        const CertificateThresholds& thresholds = {});

/// Same metrics for an externally supplied field z (N+1 interface values);
/// the gradient is used as given (c = 0).
DualCertificate certificate_from_field(std::span<const double> rho, std::span<const double> gradient,
                                       std::span<const double> z_values,
                                       const CertificateGeometry& geometry,
                                       const CertificateThresholds& thresholds = {});

/// g = phi / tau + h log(max(rho, floor)).
std::vector<double> step_gradient(const GridDensity& rho1, std::span<const double> phi, double tau,
                                  double entropy_h, double log_floor = 1e-300);

DualCertificate build_certificate(const GridDensity& rho1, std::span<const double> phi, double tau,
                                  double entropy_h);

DualCertificate certificate_from_field(const GridDensity& rho1, std::span<const double> phi,
                                       double tau, double entropy_h,
                                       std::span<const double> z_values);

struct ConditionCheck {
  bool passed = false;
  double margin = 0.0;
};

struct SufficientConditionsReport {
  /// phi/tau + z' >= -tol everywhere.
  ConditionCheck inequality;
  /// |phi/tau + z'| <= tol where rho1 is above the vacuum threshold.
  ConditionCheck equality_on_support;
  /// |z| <= 1 + tol and jump alignment <= tol.
  ConditionCheck field_bound;
  bool all_passed() const {
    return inequality.passed && equality_on_support.passed && field_bound.passed;
  }
};

SufficientConditionsReport check_sufficient_conditions(const GridDensity& rho1, const GridDensity& rho0,
                                                       double tau, const DualCertificate& cert,
                                                       double tol,
                                                       const CertificateThresholds& thresholds = {});

/// Writes `x_interface,z` and `x_center,beta,residual_cell`.
void write_certificate_csv(const std::string& z_path, const std::string& cell_path,
                           const GridSpec& grid, const DualCertificate& cert);

}  // namespace tvjko
