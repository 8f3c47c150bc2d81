#pragma once

#include "conical/field.hpp"

#include <vector>

namespace conical {

/// Real density samples f(zeta) on a grid (intended f = k e^{2u}).  The
/// radial flag marks densities that depend on |zeta| only; flagged densities
/// are evaluated through the exact 1-D radial formula instead of the 2-D
/// singular quadrature.
struct Density {
    PolarGrid grid;
    std::vector<double> values; // radial-major, one per node
    bool radial = false;

    Density(PolarGrid g, std::vector<double> v, bool radial_flag = false);
    double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
};

Density density_from_field(const Field& f, bool radial_flag = false);

/// Green's function of the unit disk, g_D(z,zeta) = -log|(z-zeta)/(1-conj(zeta) z)|.
/// Nonnegative and symmetric; coincident points raise PreconditionError.
double green_function(cplx z, cplx zeta);

/// Node-centered quadrature cells of the annulus, uniform in t = log rho
/// with half cells at the two boundary levels.  `weight` is the area of one
/// angular cell at that level; `t_quad` is the t of the cell center (shifted
/// inward by dt/4 on the boundary rows); `t_centroid` is the center of mass
/// of the cell under the area measure e^{2t} dt.
struct AnnulusQuadrature {
    std::vector<double> t_lo, t_hi, t_quad, r_quad, weight, t_centroid;
    static AnnulusQuadrature for_grid(const PolarGrid& g);
};

/// Area quadrature of exp(scale * f) over the annulus, with f interpolated
/// linearly in t to the measure centroid of each cell (kills the O(dt^2)
/// drift of plain node evaluation).  Throws nothing; returns +inf on
/// overflow.
double exp_quadrature(const Field& f, double scale);

struct PotentialResult {
    Field values;
    double value_at_zero = 0.0;
    /// Inward partial masses failed the Cauchy decay test (evidence that the
    /// density is not integrable across the puncture).
    bool divergence_suspected = false;
    /// Density below this radius is unknown and treated as zero.
    double inner_cutoff = 0.0;
};

/// Newton potential v(z) = (1/2pi) iint log|z-zeta| f(zeta) dsigma.
/// Midpoint rule over the cells; the cell containing z contributes the
/// integral of the kernel over the equal-area disk times f(z).  Same-grid
/// evaluation runs as a circular convolution in theta (FFT per level pair).
PotentialResult newton_potential(const Density& f, const PolarGrid& eval);

/// Green potential q(z) = (1/2pi) iint g_D(z,zeta) f(zeta) dsigma, same
/// quadrature; q <= 0 whenever f <= 0.
PotentialResult green_potential(const Density& f, const PolarGrid& eval);

struct ProbeResult {
    double value = 0.0;
    /// Quadrature value divided by the value on the 2x-coarsened node set;
    /// a ratio near 1 is convergence evidence.  NaN when the grid cannot be
    /// coarsened.
    double refinement_ratio = 0.0;
    bool overflowed = false;
};

/// Integrability probe: quadrature of e^{p |v|} over the annulus, v the
/// Newton potential of f.  Diagnostic evidence, not a proof.
ProbeResult brezis_merle_probe(const Density& f, double p);

} // namespace conical
