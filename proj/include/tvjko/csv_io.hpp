#pragma once

#include <string>

#include "tvjko/grid_density.hpp"
#include "tvjko/radial.hpp"

namespace tvjko {

/// Reads `x,rho` with one row per cell center. The grid is inferred from the
/// x column, which must be equispaced within 1e-9 of the domain length.
/// Errors name the offending row (1-based, header is row 1).
GridDensity read_density_csv(const std::string& path);

/// Reads `r,rho` on [0, R]; centers must start at dr / 2.
RadialDensity read_radial_csv(const std::string& path, int dimension);

/// Writes `x,rho`.
void write_density_csv(const std::string& path, const GridDensity& rho);

}  // namespace tvjko
