#include "conical/potentials.hpp"

#include "conical/errors.hpp"
#include "conical/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace conical {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Density::Density(PolarGrid g, std::vector<double> v, bool radial_flag)
    : grid(std::move(g)), values(std::move(v)), radial(radial_flag) {
    if (values.size() != grid.n_nodes())
        throw PreconditionError("Density: value count does not match grid");
    for (double x : values)
        if (!std::isfinite(x))
            throw PreconditionError("Density: non-finite entry");
    if (radial) {
        for (std::size_t i = 0; i < grid.n_radial(); ++i)
            for (std::size_t j = 1; j < grid.n_angular(); ++j)
                if (values[grid.index(i, j)] != values[grid.index(i, 0)])
                    throw PreconditionError("Density: radial flag set but values vary in theta");
    }
}

Density density_from_field(const Field& f, bool radial_flag) {
    std::vector<double> v(f.size());
    for (std::size_t idx = 0; idx < f.size(); ++idx)
        v[idx] = f[idx].real();
    return Density(f.grid(), std::move(v), radial_flag);
}

double green_function(cplx z, cplx zeta) {
    if (z == zeta)
        throw PreconditionError("green_function: coincident points (pole)");
    const double num = std::abs(z - zeta);
    const double den = std::abs(1.0 - std::conj(zeta) * z);
    return -std::log(num / den);
}

AnnulusQuadrature AnnulusQuadrature::for_grid(const PolarGrid& g) {
    const std::size_t nr = g.n_radial();
    const double half = 0.5 * g.dt();
    AnnulusQuadrature q;
    q.t_lo.resize(nr);
    q.t_hi.resize(nr);
    q.t_quad.resize(nr);
    q.r_quad.resize(nr);
    q.weight.resize(nr);
    q.t_centroid.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        q.t_lo[i] = i == 0 ? g.t(0) : g.t(i) - half;
        q.t_hi[i] = i == nr - 1 ? 0.0 : g.t(i) + half;
        q.t_quad[i] = 0.5 * (q.t_lo[i] + q.t_hi[i]);
        q.r_quad[i] = std::exp(q.t_quad[i]);
        const double e_lo = std::exp(2.0 * q.t_lo[i]);
        const double e_hi = std::exp(2.0 * q.t_hi[i]);
        q.weight[i] = g.dtheta() * 0.5 * (e_hi - e_lo);
        // int t e^{2t} / int e^{2t} over the cell
        q.t_centroid[i] = (0.25 * (e_hi * (2.0 * q.t_hi[i] - 1.0) - e_lo * (2.0 * q.t_lo[i] - 1.0))) /
                          (0.5 * (e_hi - e_lo));
    }
    return q;
}

double exp_quadrature(const Field& f, double scale) {
    const PolarGrid& g = f.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    const AnnulusQuadrature q = AnnulusQuadrature::for_grid(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        // linear interpolation of f in t toward the measure centroid
        const double off = q.t_centroid[i] - g.t(i);
        const std::size_t nb = off >= 0.0 ? std::min(i + 1, nr - 1) : (i > 0 ? i - 1 : i);
        const double w = nb == i ? 0.0 : off / (g.t(nb) - g.t(i));
        for (std::size_t j = 0; j < na; ++j) {
            const double fij = f.real_at(i, j);
            const double e = scale * (fij + w * (f.real_at(nb, j) - fij));
            if (e > 700.0)
                return std::numeric_limits<double>::infinity();
            acc += std::exp(e) * q.weight[i];
        }
    }
    return acc;
}

namespace {

// Density evaluated at the quadrature point of cell (i,j); the boundary rows
// interpolate linearly to the shifted cell center.
double density_at_quad(const Density& f, std::size_t i, std::size_t j) {
    const std::size_t nr = f.grid.n_radial();
    if (i == 0)
        return 0.75 * f.at(0, j) + 0.25 * f.at(1, j);
    if (i == nr - 1)
        return 0.75 * f.at(nr - 1, j) + 0.25 * f.at(nr - 2, j);
    return f.at(i, j);
}

// Diagonal-cell weight: exact integral of log|z - zeta| over the disk of the
// same area (half disk when the node sits on a cell edge), divided by f(z).
double diagonal_weight_newton(double cell_area, bool boundary_row) {
    const double r = boundary_row ? std::sqrt(2.0 * cell_area / std::numbers::pi)
                                  : std::sqrt(cell_area / std::numbers::pi);
    return cell_area * (std::log(r) - 0.5);
}

// Inward partial masses must keep decaying or the density is suspect of
// being non-integrable across the puncture: fit the slope of the log mass
// density per unit t (mean |f| times e^{2t}) over the inner third and flag
// slope <= ~0.  A power |f| ~ rho^{2 gamma} has slope 2 gamma + 2.
bool mass_cauchy_fails(const PolarGrid& g, const Density& f) {
    const std::size_t nr = g.n_radial();
    if (nr < 6)
        return false;
    std::vector<double> log_mass;
    std::vector<double> ts;
    const std::size_t inner = std::max<std::size_t>(4, nr / 3);
    for (std::size_t i = 0; i < inner; ++i) {
        double mass = 0.0;
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            mass += std::abs(f.at(i, j)) * std::exp(2.0 * g.t(i));
        if (mass <= 0.0)
            return false; // vanishing density near the puncture is integrable
        log_mass.push_back(std::log(mass));
        ts.push_back(g.t(i));
    }
    double tbar = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        tbar += ts[k];
        ybar += log_mass[k];
    }
    tbar /= static_cast<double>(ts.size());
    ybar /= static_cast<double>(ts.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        num += (ts[k] - tbar) * (log_mass[k] - ybar);
        den += (ts[k] - tbar) * (ts[k] - tbar);
    }
    return num / den <= 1e-6;
}

enum class Kernel { Newton, Green };

// Same-grid evaluation: for fixed level pair (i,i') the kernel depends on
// the angle difference only, so each level couple is a circular convolution.
Field potential_same_grid(const Density& f, Kernel kind) {
    const PolarGrid& g = f.grid;
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    const AnnulusQuadrature q = AnnulusQuadrature::for_grid(g);

    std::vector<double> cos_table(na);
    for (std::size_t d = 0; d < na; ++d)
        cos_table[d] = std::cos(g.dtheta() * static_cast<double>(d));

    // spectra of the weighted density rows
    std::vector<std::vector<cplx>> ghat(nr, std::vector<cplx>(na));
    for (std::size_t ip = 0; ip < nr; ++ip) {
        for (std::size_t j = 0; j < na; ++j)
            ghat[ip][j] = cplx(density_at_quad(f, ip, j) * q.weight[ip], 0.0);
        fft_pow2(ghat[ip]);
    }

    Field out(g, FieldKind::Real);
    std::vector<cplx> kernel(na);
    std::vector<cplx> acc(na);
    for (std::size_t i = 0; i < nr; ++i) {
        const double rho = g.radius(i);
        std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
        for (std::size_t ip = 0; ip < nr; ++ip) {
            const double rq = q.r_quad[ip];
            const double a = rho * rho + rq * rq;
            const double b = 2.0 * rho * rq;
            const double ag = 1.0 + rho * rho * rq * rq;
            for (std::size_t d = 0; d < na; ++d) {
                const double newton = 0.5 * std::log(a - b * cos_table[d]);
                double val;
                if (kind == Kernel::Newton) {
                    val = newton;
                } else {
                    // g_D >= 0; clamp away rounding so sign properties hold
                    val = std::max(-newton + 0.5 * std::log(ag - b * cos_table[d]), 0.0);
                }
                kernel[d] = cplx(val, 0.0);
            }
            if (ip == i)
                kernel[0] = cplx(0.0, 0.0); // own cell handled below
            fft_pow2(kernel);
            for (std::size_t k = 0; k < na; ++k)
                acc[k] += kernel[k] * ghat[ip][k];
        }
        ifft_pow2(acc);

        const bool boundary_row = (i == 0 || i == nr - 1);
        double diag = diagonal_weight_newton(q.weight[i], boundary_row);
        if (kind == Kernel::Green) {
            const double smooth = std::log(1.0 - rho * q.r_quad[i]);
            diag = std::max(-diag + q.weight[i] * smooth, 0.0);
        }
        for (std::size_t j = 0; j < na; ++j)
            out.at(i, j) = cplx((acc[j].real() + f.at(i, j) * diag) / kTwoPi, 0.0);
    }
    return out;
}

Field potential_cross_grid(const Density& f, const PolarGrid& eval, Kernel kind) {
    const PolarGrid& gd = f.grid;
    const std::size_t nr = gd.n_radial();
    const std::size_t na = gd.n_angular();
    const AnnulusQuadrature q = AnnulusQuadrature::for_grid(gd);
    const double t0 = gd.t(0);

    Field out(eval, FieldKind::Real);
    for (std::size_t ei = 0; ei < eval.n_radial(); ++ei) {
        for (std::size_t ej = 0; ej < eval.n_angular(); ++ej) {
            const cplx z = eval.node(ei, ej);
            const double tz = std::log(std::abs(z));
            // cell of the density grid containing z, if any
            long ci = -1, cj = -1;
            if (tz >= t0 - 1e-12 && tz <= 1e-12) {
                ci = std::lround((tz - t0) / gd.dt());
                ci = std::clamp<long>(ci, 0, static_cast<long>(nr) - 1);
                double th = std::arg(z);
                if (th < 0.0)
                    th += kTwoPi;
                cj = std::lround(th / gd.dtheta());
                cj = cj % static_cast<long>(na);
            }
            double sum = 0.0;
            for (std::size_t ip = 0; ip < nr; ++ip) {
                for (std::size_t jp = 0; jp < na; ++jp) {
                    if (static_cast<long>(ip) == ci && static_cast<long>(jp) == cj)
                        continue;
                    const cplx zeta = std::polar(q.r_quad[ip], gd.theta(jp));
                    double val = std::log(std::abs(z - zeta));
                    if (kind == Kernel::Green)
                        val = std::max(-val + std::log(std::abs(1.0 - std::conj(zeta) * z)), 0.0);
                    sum += val * density_at_quad(f, ip, jp) * q.weight[ip];
                }
            }
            if (ci >= 0) {
                const auto ui = static_cast<std::size_t>(ci);
                const auto uj = static_cast<std::size_t>(cj);
                const bool boundary_row = (ui == 0 || ui == nr - 1);
                double diag = diagonal_weight_newton(q.weight[ui], boundary_row);
                if (kind == Kernel::Green) {
                    const double smooth =
                        std::log(std::abs(1.0 - std::polar(q.r_quad[ui], gd.theta(uj)) *
                                                    std::conj(z)));
                    diag = std::max(-diag + q.weight[ui] * smooth, 0.0);
                }
                sum += f.at(ui, uj) * diag;
            }
            out.at(ei, ej) = cplx(sum / kTwoPi, 0.0);
        }
    }
    return out;
}

// v(rho) = log(rho) * int_eps^rho f s ds + int_rho^1 f s log s ds for radial
// densities; cell integrals of e^{2t} and t e^{2t} are exact, so the only
// error is the sampling of f itself.
std::vector<double> radial_newton_profile(const Density& f) {
    const PolarGrid& g = f.grid;
    const std::size_t nr = g.n_radial();
    const AnnulusQuadrature q = AnnulusQuadrature::for_grid(g);

    auto int_e2t = [](double a, double b) { return 0.5 * (std::exp(2.0 * b) - std::exp(2.0 * a)); };
    auto int_te2t = [](double a, double b) {
        return 0.25 * (std::exp(2.0 * b) * (2.0 * b - 1.0) - std::exp(2.0 * a) * (2.0 * a - 1.0));
    };

    std::vector<double> prof(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        const double ti = g.t(i);
        double inner = 0.0; // int_eps^rho f s ds
        double outer = 0.0; // int_rho^1 f s log s ds
        for (std::size_t ip = 0; ip < nr; ++ip) {
            const double fq = density_at_quad(f, ip, 0);
            const double lo = q.t_lo[ip];
            const double hi = q.t_hi[ip];
            if (hi <= ti) {
                inner += fq * int_e2t(lo, hi);
            } else if (lo >= ti) {
                outer += fq * int_te2t(lo, hi);
            } else {
                inner += f.at(ip, 0) * int_e2t(lo, ti);
                outer += f.at(ip, 0) * int_te2t(ti, hi);
            }
        }
        prof[i] = ti * inner + outer;
    }
    return prof;
}

double newton_value_at_zero(const Density& f, const AnnulusQuadrature& q) {
    const PolarGrid& g = f.grid;
    if (f.radial) {
        auto int_te2t = [](double a, double b) {
            return 0.25 *
                   (std::exp(2.0 * b) * (2.0 * b - 1.0) - std::exp(2.0 * a) * (2.0 * a - 1.0));
        };
        double acc = 0.0;
        for (std::size_t i = 0; i < g.n_radial(); ++i)
            acc += density_at_quad(f, i, 0) * int_te2t(q.t_lo[i], q.t_hi[i]);
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            acc += q.t_quad[i] * density_at_quad(f, i, j) * q.weight[i];
    return acc / kTwoPi;
}

} // namespace

PotentialResult newton_potential(const Density& f, const PolarGrid& eval) {
    const AnnulusQuadrature q = AnnulusQuadrature::for_grid(f.grid);
    PotentialResult res{Field(eval, FieldKind::Real), 0.0, false, f.grid.inner_radius()};
    if (f.radial && eval == f.grid) {
        const std::vector<double> prof = radial_newton_profile(f);
        for (std::size_t i = 0; i < eval.n_radial(); ++i)
            for (std::size_t j = 0; j < eval.n_angular(); ++j)
                res.values.at(i, j) = cplx(prof[i], 0.0);
    } else if (eval == f.grid) {
        res.values = potential_same_grid(f, Kernel::Newton);
    } else {
        res.values = potential_cross_grid(f, eval, Kernel::Newton);
    }
    res.value_at_zero = newton_value_at_zero(f, q);
    res.divergence_suspected = mass_cauchy_fails(f.grid, f);
    return res;
}

PotentialResult green_potential(const Density& f, const PolarGrid& eval) {
    const AnnulusQuadrature q = AnnulusQuadrature::for_grid(f.grid);
    PotentialResult res{Field(eval, FieldKind::Real), 0.0, false, f.grid.inner_radius()};
    if (eval == f.grid) {
        res.values = potential_same_grid(f, Kernel::Green);
    } else {
        res.values = potential_cross_grid(f, eval, Kernel::Green);
    }
    // g_D(0, zeta) = -log|zeta|
    double acc = 0.0;
    for (std::size_t i = 0; i < f.grid.n_radial(); ++i)
        for (std::size_t j = 0; j < f.grid.n_angular(); ++j)
            acc += -q.t_quad[i] * density_at_quad(f, i, j) * q.weight[i];
    res.value_at_zero = acc / kTwoPi;
    res.divergence_suspected = mass_cauchy_fails(f.grid, f);
    return res;
}

ProbeResult brezis_merle_probe(const Density& f, double p) {
    if (!(p > 0.0))
        throw PreconditionError("brezis_merle_probe: p must be positive");
    const PolarGrid& g = f.grid;
    const PotentialResult pot = newton_potential(f, g);

    Field absv(g, FieldKind::Real);
    for (std::size_t idx = 0; idx < absv.size(); ++idx)
        absv[idx] = cplx(std::abs(pot.values[idx].real()), 0.0);

    ProbeResult res;
    res.value = exp_quadrature(absv, p);
    if (!std::isfinite(res.value)) {
        res.overflowed = true;
        res.refinement_ratio = std::numeric_limits<double>::quiet_NaN();
        return res;
    }

    // coarsened node set: every other level and angle, when available
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    if ((nr - 1) % 2 == 0 && na >= 8) {
        const PolarGrid gc = make_grid(g.inner_radius(), (nr - 1) / 2 + 1, na / 2);
        Field coarse(gc, FieldKind::Real);
        for (std::size_t i = 0; i < gc.n_radial(); ++i)
            for (std::size_t j = 0; j < gc.n_angular(); ++j)
                coarse.at(i, j) = absv.at(2 * i, 2 * j);
        res.refinement_ratio = res.value / exp_quadrature(coarse, p);
    } else {
        res.refinement_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    return res;
}

} // namespace conical
