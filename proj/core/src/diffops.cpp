#include "conical/diffops.hpp"

#include "conical/errors.hpp"
#include "conical/fft.hpp"

#include <cmath>
#include <vector>

namespace conical {

namespace {

// d/dt along the radial index, second order everywhere.
Field derivative_t(const Field& f) {
    const PolarGrid& g = f.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    const double inv2dt = 1.0 / (2.0 * g.dt());
    Field out(g, FieldKind::Complex);
    for (std::size_t j = 0; j < na; ++j) {
        out.at(0, j) = (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) * inv2dt;
        out.at(nr - 1, j) =
            (3.0 * f.at(nr - 1, j) - 4.0 * f.at(nr - 2, j) + f.at(nr - 3, j)) * inv2dt;
    }
    for (std::size_t i = 1; i + 1 < nr; ++i)
        for (std::size_t j = 0; j < na; ++j)
            out.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) * inv2dt;
    return out;
}

// d^2/dt^2; one-sided 4-point stencils at the boundary levels (3-point
// fallback when only three levels exist).
Field derivative_tt(const Field& f) {
    const PolarGrid& g = f.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    const double invdt2 = 1.0 / (g.dt() * g.dt());
    Field out(g, FieldKind::Complex);
    for (std::size_t i = 1; i + 1 < nr; ++i)
        for (std::size_t j = 0; j < na; ++j)
            out.at(i, j) = (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) * invdt2;
    for (std::size_t j = 0; j < na; ++j) {
        if (nr >= 4) {
            out.at(0, j) = (2.0 * f.at(0, j) - 5.0 * f.at(1, j) + 4.0 * f.at(2, j) - f.at(3, j)) *
                           invdt2;
            out.at(nr - 1, j) = (2.0 * f.at(nr - 1, j) - 5.0 * f.at(nr - 2, j) +
                                 4.0 * f.at(nr - 3, j) - f.at(nr - 4, j)) *
                                invdt2;
        } else {
            const cplx second = (f.at(0, j) - 2.0 * f.at(1, j) + f.at(2, j)) * invdt2;
            out.at(0, j) = second;
            out.at(nr - 1, j) = second;
        }
    }
    return out;
}

// Spectral angular derivative: multiplier i*n for order 1 (Nyquist zeroed),
// -n^2 for order 2.
Field derivative_theta(const Field& f, int order) {
    const PolarGrid& g = f.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    Field out(g, FieldKind::Complex);
    std::vector<cplx> row(na);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < na; ++j)
            row[j] = f.at(i, j);
        fft_pow2(row);
        for (std::size_t k = 0; k < na; ++k) {
            const auto n = static_cast<double>(dft_frequency(k, na));
            if (order == 1) {
                row[k] *= (k == na / 2) ? cplx(0.0, 0.0) : cplx(0.0, n);
            } else {
                row[k] *= -n * n;
            }
        }
        ifft_pow2(row);
        for (std::size_t j = 0; j < na; ++j)
            out.at(i, j) = row[j];
    }
    return out;
}

Field strip_imaginary(Field f) {
    for (std::size_t idx = 0; idx < f.size(); ++idx)
        f[idx] = cplx(f[idx].real(), 0.0);
    return f;
}

const GridSampled& require_samples_on(const MetricDescriptor& m, const PolarGrid& g,
                                      const char* op) {
    const GridSampled* gs = m.as_grid_sampled();
    if (gs == nullptr)
        throw PreconditionError(std::string(op) + ": descriptor is closed-form");
    if (!(gs->u.grid() == g))
        throw PreconditionError(std::string(op) +
                                ": GridSampled descriptor must be evaluated on its own grid");
    return *gs;
}

} // namespace

cplx ipow(cplx z, unsigned n) {
    cplx r(1.0, 0.0);
    for (unsigned k = 0; k < n; ++k)
        r *= z;
    return r;
}

Field wirtinger_dz(const Field& f) {
    const PolarGrid& g = f.grid();
    const Field ft = derivative_t(f);
    const Field fth = derivative_theta(f, 1);
    Field out(g, FieldKind::Complex);
    const cplx half_i(0.0, 0.5);
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double scale = std::exp(-g.t(i));
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const double th = g.theta(j);
            const cplx phase(std::cos(th), -std::sin(th));
            out.at(i, j) = scale * phase * (0.5 * ft.at(i, j) - half_i * fth.at(i, j));
        }
    }
    return out;
}

Field laplacian(const Field& f) {
    const PolarGrid& g = f.grid();
    const Field ftt = derivative_tt(f);
    const Field fthth = derivative_theta(f, 2);
    Field out(g, f.kind());
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double scale = std::exp(-2.0 * g.t(i));
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            out.at(i, j) = scale * (ftt.at(i, j) + fthth.at(i, j));
    }
    return f.kind() == FieldKind::Real ? strip_imaginary(std::move(out)) : out;
}

namespace {

cplx spherical_connection(double beta, cplx z) {
    // Gamma = [(beta-1) - 2 beta w/(1+w)] / z with w = |z|^{2 beta};
    // z^{beta-1} conj(z)^beta collapses to |z|^{2 beta} / z, so the value is
    // single-valued for every beta > 0.
    const double w = std::exp(2.0 * beta * std::log(std::abs(z)));
    return ((beta - 1.0) - 2.0 * beta * w / (1.0 + w)) / z;
}

cplx spherical_schwarzian(double beta, cplx z) {
    return (1.0 - beta * beta) / (2.0 * z * z);
}

cplx flat_connection(const PowerLawFlat& p, cplx z) {
    return p.gamma / z + p.h.phi_prime(z);
}

cplx flat_schwarzian(const PowerLawFlat& p, cplx z) {
    const cplx gamma_conn = p.gamma / z + p.h.phi_prime(z);
    return -p.gamma / (z * z) + p.h.phi_second(z) - 0.5 * gamma_conn * gamma_conn;
}

} // namespace

cplx connection_at(const MetricDescriptor& m, cplx z) {
    if (const auto* s = std::get_if<SphericalLiouville>(&m.variant()))
        return spherical_connection(s->beta, z);
    if (const auto* p = std::get_if<PowerLawFlat>(&m.variant()))
        return flat_connection(*p, z);
    throw PreconditionError("connection_at: closed-form descriptor required");
}

cplx schwarzian_at(const MetricDescriptor& m, cplx z) {
    if (const auto* s = std::get_if<SphericalLiouville>(&m.variant()))
        return spherical_schwarzian(s->beta, z);
    if (const auto* p = std::get_if<PowerLawFlat>(&m.variant()))
        return flat_schwarzian(*p, z);
    throw PreconditionError("schwarzian_at: closed-form descriptor required");
}

Field connection(const MetricDescriptor& m, const PolarGrid& g) {
    if (m.is_closed_form())
        return make_complex_field(g, [&](cplx z) { return connection_at(m, z); });
    const GridSampled& gs = require_samples_on(m, g, "connection");
    Field du = wirtinger_dz(gs.u);
    for (std::size_t idx = 0; idx < du.size(); ++idx)
        du[idx] *= 2.0;
    return du;
}

Field schwarzian(const MetricDescriptor& m, const PolarGrid& g) {
    if (m.is_closed_form())
        return make_complex_field(g, [&](cplx z) { return schwarzian_at(m, z); });
    require_samples_on(m, g, "schwarzian");
    const Field gamma = connection(m, g);
    const Field dgamma = wirtinger_dz(gamma);
    Field out(g, FieldKind::Complex);
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        out[idx] = dgamma[idx] - 0.5 * gamma[idx] * gamma[idx];
    return out;
}

Field curvature(const MetricDescriptor& m, const PolarGrid& g) {
    const Field u = sample_metric(m, g);
    const Field lap = laplacian(u);
    Field out(g, FieldKind::Real);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const double exponent = -2.0 * u[idx].real();
        if (exponent > 700.0)
            throw PreconditionError("curvature: e^{-2u} overflows");
        out[idx] = cplx(-lap[idx].real() * std::exp(exponent), 0.0);
    }
    return out;
}

MetricDescriptor pullback(const MetricDescriptor& m, unsigned m_cov, const PolarGrid& g) {
    if (m_cov < 1)
        throw PreconditionError("pullback: cover order must be >= 1");
    const double md = static_cast<double>(m_cov);
    const double image_eps = std::exp(md * std::log(g.inner_radius()));
    if (!(image_eps > 0.0) || image_eps < 1e-300)
        throw PreconditionError("pullback: image radius eps^m underflows");
    if (const GridSampled* gs = m.as_grid_sampled()) {
        if (image_eps < gs->u.grid().inner_radius() * (1.0 - 1e-12))
            throw PreconditionError("pullback: image annulus leaves the sampled domain");
    }

    Field ustar(g, FieldKind::Real);
    const double logm = std::log(md);
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double t = g.t(i);
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const cplx w = std::polar(std::exp(md * t), md * g.theta(j));
            ustar.at(i, j) = cplx(logm + (md - 1.0) * t + m.log_density(w), 0.0);
        }
    }
    std::optional<double> hint;
    if (auto order = m.conical_order())
        hint = *order * md + md - 1.0;
    return MetricDescriptor(GridSampled{std::move(ustar), hint});
}

MetricDescriptor pullback_closed_form(const MetricDescriptor& m, unsigned m_cov) {
    if (m_cov < 1)
        throw PreconditionError("pullback_closed_form: cover order must be >= 1");
    const double md = static_cast<double>(m_cov);
    if (const auto* s = std::get_if<SphericalLiouville>(&m.variant()))
        return MetricDescriptor(SphericalLiouville{md * s->beta});
    if (const auto* p = std::get_if<PowerLawFlat>(&m.variant())) {
        HarmonicPolynomial h;
        h.c0 = p->h.c0 + std::log(md);
        const std::size_t deg = p->h.degree();
        h.cos_coeffs.assign(deg * m_cov, 0.0);
        h.sin_coeffs.assign(deg * m_cov, 0.0);
        for (std::size_t n = 1; n <= deg; ++n) {
            if (n <= p->h.cos_coeffs.size())
                h.cos_coeffs[n * m_cov - 1] = p->h.cos_coeffs[n - 1];
            if (n <= p->h.sin_coeffs.size())
                h.sin_coeffs[n * m_cov - 1] = p->h.sin_coeffs[n - 1];
        }
        return MetricDescriptor(PowerLawFlat{p->gamma * md + md - 1.0, std::move(h)});
    }
    throw PreconditionError("pullback_closed_form: closed-form descriptor required");
}

double check_transformation_rules(const MetricDescriptor& m, unsigned m_cov, const PolarGrid& g) {
    if (!m.is_closed_form())
        throw PreconditionError("check_transformation_rules: closed-form descriptor required");
    if (m_cov < 1)
        throw PreconditionError("check_transformation_rules: cover order must be >= 1");
    const MetricDescriptor pb = pullback_closed_form(m, m_cov);
    const double md = static_cast<double>(m_cov);
    const double m2 = md * md;
    double residual = 0.0;
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const cplx z = g.node(i, j);
            const cplx zm = ipow(z, m_cov);
            const cplx zpow = ipow(z, m_cov - 1);

            const cplx rule_conn = md * connection_at(m, zm) * zpow + (md - 1.0) / z;
            const cplx exact_conn = connection_at(pb, z);
            residual = std::max(residual, std::abs(rule_conn - exact_conn));

            const cplx rule_schw =
                schwarzian_at(m, zm) * m2 * zpow * zpow - (m2 - 1.0) / (2.0 * z * z);
            const cplx exact_schw = schwarzian_at(pb, z);
            residual = std::max(residual, std::abs(rule_schw - exact_schw));
        }
    }
    return residual;
}

} // namespace conical
