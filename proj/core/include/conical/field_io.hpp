#pragma once

#include "conical/field.hpp"
#include "conical/solver.hpp"

#include <string>
#include <vector>

namespace conical {

/// Field CSV: header `rho,theta,re,im`, radial-major row order (innermost
/// level first), 17 significant digits so a write/read round trip is
/// bit-exact.  Real fields carry a zero im column.
void write_field_csv(const Field& f, const std::string& path);

/// Reconstructs the grid from the row pattern and validates the log-uniform
/// layout before returning the field.
Field read_field_csv(const std::string& path);

/// Boundary CSV: header `theta,inner,outer`, one row per angular node.
void write_boundary_csv(const BoundaryData& bc, const PolarGrid& g, const std::string& path);
BoundaryData read_boundary_csv(const std::string& path, const PolarGrid& g);

/// Circle samples CSV: header `theta,re,im`.
void write_circle_samples_csv(const std::vector<cplx>& samples, const std::string& path);
std::vector<cplx> read_circle_samples_csv(const std::string& path);

} // namespace conical
