#include "conical/metric.hpp"

#include "conical/errors.hpp"

#include <algorithm>
#include <cmath>

namespace conical {

double HarmonicPolynomial::eval(double rho, double theta) const {
    double h = c0;
    double rpow = 1.0;
    const std::size_t deg = degree();
    for (std::size_t n = 1; n <= deg; ++n) {
        rpow *= rho;
        const double c = n <= cos_coeffs.size() ? cos_coeffs[n - 1] : 0.0;
        const double s = n <= sin_coeffs.size() ? sin_coeffs[n - 1] : 0.0;
        const double dn = static_cast<double>(n);
        h += rpow * (c * std::cos(dn * theta) + s * std::sin(dn * theta));
    }
    return h;
}

cplx HarmonicPolynomial::phi_prime(cplx z) const {
    cplx acc(0.0, 0.0);
    cplx zpow(1.0, 0.0); // z^{n-1}
    const std::size_t deg = degree();
    for (std::size_t n = 1; n <= deg; ++n) {
        const double c = n <= cos_coeffs.size() ? cos_coeffs[n - 1] : 0.0;
        const double s = n <= sin_coeffs.size() ? sin_coeffs[n - 1] : 0.0;
        acc += static_cast<double>(n) * cplx(c, -s) * zpow;
        zpow *= z;
    }
    return acc;
}

cplx HarmonicPolynomial::phi_second(cplx z) const {
    cplx acc(0.0, 0.0);
    cplx zpow(1.0, 0.0); // z^{n-2}
    const std::size_t deg = degree();
    for (std::size_t n = 2; n <= deg; ++n) {
        const double c = n <= cos_coeffs.size() ? cos_coeffs[n - 1] : 0.0;
        const double s = n <= sin_coeffs.size() ? sin_coeffs[n - 1] : 0.0;
        acc += static_cast<double>(n) * static_cast<double>(n - 1) * cplx(c, -s) * zpow;
        zpow *= z;
    }
    return acc;
}

std::size_t HarmonicPolynomial::degree() const {
    return std::max(cos_coeffs.size(), sin_coeffs.size());
}

MetricDescriptor::MetricDescriptor(SphericalLiouville m) : v_(std::move(m)) {
    if (!(std::get<SphericalLiouville>(v_).beta > 0.0))
        throw PreconditionError("SphericalLiouville: beta must be positive");
}

MetricDescriptor::MetricDescriptor(PowerLawFlat m) : v_(std::move(m)) {
    if (!(std::get<PowerLawFlat>(v_).gamma > -1.0))
        throw PreconditionError("PowerLawFlat: gamma must exceed -1");
}

MetricDescriptor::MetricDescriptor(GridSampled m) : v_(std::move(m)) {
    const GridSampled& gs = std::get<GridSampled>(v_);
    if (gs.u.kind() != FieldKind::Real)
        throw PreconditionError("GridSampled: log-density samples must be real");
    gs.u.validate();
}

namespace {

double spherical_log_density(double beta, double rho) {
    // log beta + (beta-1) log rho - log(1 + rho^{2 beta})
    const double t = std::log(rho);
    return std::log(beta) + (beta - 1.0) * t - std::log1p(std::exp(2.0 * beta * t));
}

double sampled_log_density(const GridSampled& gs, cplx z) {
    return interpolate(gs.u, std::log(std::abs(z)), std::arg(z)).real();
}

} // namespace

double MetricDescriptor::log_density(cplx z) const {
    if (const auto* s = std::get_if<SphericalLiouville>(&v_))
        return spherical_log_density(s->beta, std::abs(z));
    if (const auto* p = std::get_if<PowerLawFlat>(&v_)) {
        const double rho = std::abs(z);
        return p->gamma * std::log(rho) + p->h.eval(rho, std::arg(z));
    }
    return sampled_log_density(std::get<GridSampled>(v_), z);
}

std::optional<double> MetricDescriptor::conical_order() const {
    if (const auto* s = std::get_if<SphericalLiouville>(&v_))
        return s->beta - 1.0;
    if (const auto* p = std::get_if<PowerLawFlat>(&v_))
        return p->gamma;
    return std::get<GridSampled>(v_).gamma_hint;
}

CurvatureSpec CurvatureSpec::constant(double k0) {
    if (k0 > 0.0)
        throw PreconditionError("CurvatureSpec: k must be nonpositive");
    CurvatureSpec spec;
    spec.k0_ = k0;
    spec.bound_ = std::abs(k0);
    return spec;
}

CurvatureSpec CurvatureSpec::sampled(Field k) {
    k.validate();
    double bound = 0.0;
    for (const cplx& v : k.values()) {
        if (v.real() > 0.0)
            throw PreconditionError("CurvatureSpec: k must be nonpositive");
        bound = std::max(bound, -v.real());
    }
    CurvatureSpec spec;
    spec.sampled_ = std::move(k);
    spec.bound_ = bound;
    return spec;
}

Field sample_metric(const MetricDescriptor& m, const PolarGrid& g) {
    if (const GridSampled* gs = m.as_grid_sampled()) {
        if (gs->u.grid() == g)
            return gs->u; // bit-exact round trip
    }
    Field out(g, FieldKind::Real);
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            out.at(i, j) = cplx(m.log_density(g.node(i, j)), 0.0);
    out.validate();
    return out;
}

MetricDescriptor essential_singularity_metric(const PolarGrid& g) {
    // u = log|g'| - log(1 + |g|^2) with g = e^{1/z}:
    //   log|g'| = Re(1/z) - 2 log|z|,  log(1+|g|^2) = softplus(2 Re(1/z)).
    Field u(g, FieldKind::Real);
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double rho = g.radius(i);
        const double t = g.t(i);
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const double x = std::cos(g.theta(j)) / rho; // Re(1/z)
            const double softplus = x > 0.0 ? 2.0 * x + std::log1p(std::exp(-2.0 * x))
                                            : std::log1p(std::exp(2.0 * x));
            u.at(i, j) = cplx(x - 2.0 * t - softplus, 0.0);
        }
    }
    return MetricDescriptor(GridSampled{std::move(u), std::nullopt});
}

} // namespace conical
