#pragma once

#include "conical/field.hpp"
#include "conical/metric.hpp"

namespace conical {

/// Wirtinger derivative df/dz = (1/2) e^{-t} e^{-i theta} (d_t - i d_theta) f.
/// Angular derivative is spectral (FFT), radial is second-order centered in
/// t = log rho with one-sided second-order stencils at the boundary levels.
Field wirtinger_dz(const Field& f);

/// Laplacian e^{-2t} (d_tt + d_theta theta) f with the same scheme; exact on
/// fields quadratic in t and trigonometric of degree < n_angular/2 in theta.
Field laplacian(const Field& f);

/// Connection Gamma = 2 du/dz of the metric e^{u}|dz|.  Closed-form
/// descriptors use exact formulas; GridSampled uses wirtinger_dz and
/// requires g to be the sample grid.
Field connection(const MetricDescriptor& m, const PolarGrid& g);

/// Schwarzian S = dGamma/dz - Gamma^2/2.  For SphericalLiouville(beta) this
/// is (1 - beta^2) / (2 z^2) exactly.
Field schwarzian(const MetricDescriptor& m, const PolarGrid& g);

/// Gaussian curvature -Delta u e^{-2u} of e^{u}|dz|, evaluated through the
/// grid Laplacian (so closed-form metrics are verified, not assumed).
Field curvature(const MetricDescriptor& m, const PolarGrid& g);

/// Pointwise closed-form connection / Schwarzian; throws PreconditionError
/// for GridSampled descriptors.
cplx connection_at(const MetricDescriptor& m, cplx z);
cplx schwarzian_at(const MetricDescriptor& m, cplx z);

/// Pullback of the metric under z -> z^m: u*(z) = log m + (m-1) log|z|
/// + u(z^m), sampled on g.  The conical order maps to gamma*m + m - 1.
MetricDescriptor pullback(const MetricDescriptor& m, unsigned m_cov, const PolarGrid& g);

/// Exact pullback within the closed-form families:
/// SphericalLiouville(beta) -> SphericalLiouville(m beta),
/// PowerLawFlat(gamma, h) -> PowerLawFlat(gamma*m + m - 1, log m + h(z^m)).
MetricDescriptor pullback_closed_form(const MetricDescriptor& m, unsigned m_cov);

/// Max-norm residual over the nodes of g of the two cover transformation
/// rules
///   Gamma*(z) = m Gamma(z^m) z^{m-1} + (m-1)/z
///   S*(z)     = S(z^m) m^2 z^{2(m-1)} - (m^2-1)/(2 z^2)
/// checked against the exact closed-form pullback.  Closed-form input only.
double check_transformation_rules(const MetricDescriptor& m, unsigned m_cov, const PolarGrid& g);

/// z^n by repeated multiplication (exact identity for n = 0, 1).
cplx ipow(cplx z, unsigned n);

} // namespace conical
