#include "conical/asymptotics.hpp"

#include "conical/diffops.hpp"
#include "conical/errors.hpp"
#include "conical/fft.hpp"
#include "conical/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace conical {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LineFit {
    double slope = 0.0;
    double stderr_value = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        xbar += x[k];
        ybar += y[k];
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - xbar) * (x[k] - xbar);
        sxy += (x[k] - xbar) * (y[k] - ybar);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    if (n > 2) {
        const double intercept = ybar - fit.slope * xbar;
        double ss = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = y[k] - intercept - fit.slope * x[k];
            ss += r * r;
        }
        fit.stderr_value = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

} // namespace

GammaFit fit_gamma(const Field& u) {
    const PolarGrid& g = u.grid();
    const std::size_t nr = g.n_radial();
    if (nr < 4)
        throw PreconditionError("fit_gamma: need at least 4 radial levels");
    const std::size_t window = std::max<std::size_t>(3, nr / 2);

    std::vector<double> ts(window), means(window);
    for (std::size_t i = 0; i < window; ++i) {
        ts[i] = g.t(i);
        means[i] = circle_mean(u, i);
    }
    const LineFit fit = least_squares(ts, means);
    return GammaFit{fit.slope, fit.stderr_value, window};
}

EnergyResult energy(const Field& u) {
    const PolarGrid& g = u.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();

    EnergyResult res;
    // per-unit-t mass profile: e^{2u} ~ rho^{2 gamma} gives slope 2 gamma + 2
    std::vector<double> level_mass(nr, 0.0);
    bool overflow = false;
    for (std::size_t i = 0; i < nr && !overflow; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const double e = 2.0 * (u.real_at(i, j) + g.t(i));
            if (e > 700.0) {
                overflow = true;
                break;
            }
            level_mass[i] += std::exp(e);
        }
    }
    const double total = overflow ? std::numeric_limits<double>::infinity()
                                  : exp_quadrature(u, 2.0);

    GammaFit fit{};
    bool have_fit = false;
    if (nr >= 4) {
        fit = fit_gamma(u);
        have_fit = true;
        res.gamma_used = fit.gamma_hat;
    }

    // inward level masses must decay (slope of log mass vs t positive);
    // the flat profile of u = -log|z| sits exactly at slope 0.
    bool mass_stalls = false;
    if (!overflow && nr >= 6) {
        const std::size_t inner = std::max<std::size_t>(4, nr / 3);
        std::vector<double> ts, lm;
        for (std::size_t i = 0; i < inner; ++i) {
            if (level_mass[i] <= 0.0)
                break;
            ts.push_back(g.t(i));
            lm.push_back(std::log(level_mass[i]));
        }
        if (ts.size() == inner)
            mass_stalls = least_squares(ts, lm).slope <= 1e-6;
    }

    if (overflow || !std::isfinite(total) || mass_stalls ||
        (have_fit && fit.gamma_hat <= -1.0 + 1e-12)) {
        res.divergent = true;
        res.value = std::numeric_limits<double>::infinity();
        return res;
    }

    if (have_fit) {
        // e^{2u} ~ C rho^{2 gamma} below eps, so the tail integrates to
        // 2 pi C eps^{2 gamma + 2} / (2 gamma + 2).
        double cbar = 0.0;
        for (std::size_t j = 0; j < na; ++j)
            cbar += std::exp(2.0 * (u.real_at(0, j) - fit.gamma_hat * g.t(0)));
        cbar /= static_cast<double>(na);
        const double expo = 2.0 * fit.gamma_hat + 2.0;
        res.tail = kTwoPi * cbar * std::exp(expo * g.t(0)) / expo;
    }
    res.value = total + res.tail;
    return res;
}

DecompositionReport verify_decomposition(const Field& u, const CurvatureSpec& k) {
    const PolarGrid& g = u.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    const GammaFit fit = fit_gamma(u);

    std::vector<double> fvals(g.n_nodes());
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < na; ++j)
            fvals[g.index(i, j)] = k.value_at(i, j) * std::exp(2.0 * u.real_at(i, j));
    const Density density(g, std::move(fvals));
    const PotentialResult pot = newton_potential(density, g);

    Field h(g, FieldKind::Real);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < na; ++j)
            h.at(i, j) =
                cplx(u.real_at(i, j) - fit.gamma_hat * g.t(i) - pot.values.real_at(i, j), 0.0);

    DecompositionReport rep;
    rep.gamma_hat = fit.gamma_hat;
    rep.quadrature_divergence = pot.divergence_suspected;

    // harmonic defect in the chart: rho^2 * Delta h = (d_tt + d_thth) h;
    // skip two levels next to each radial boundary where the quadrature
    // error of v is not smooth.
    const Field lap = laplacian(h);
    const std::size_t margin = nr >= 9 ? 2 : 1;
    for (std::size_t i = margin; i + margin < nr; ++i) {
        const double rho2 = std::exp(2.0 * g.t(i));
        for (std::size_t j = 0; j < na; ++j)
            rep.laplace_defect = std::max(rep.laplace_defect,
                                          std::abs(lap.real_at(i, j)) * rho2);
    }

    // h harmonic across the puncture has constant circle means; the fitted
    // slope of the means in t is the amplitude of any leftover log term.
    std::vector<double> ts(fit.window), means(fit.window);
    for (std::size_t i = 0; i < fit.window; ++i) {
        ts[i] = g.t(i);
        means[i] = circle_mean(h, i);
    }
    rep.mvp_defect = std::abs(least_squares(ts, means).slope);
    return rep;
}

namespace {

LimitEstimate extrapolate_dyadic(const std::vector<cplx>& seq) {
    LimitEstimate est;
    const std::size_t n = seq.size();
    if (n < 3) {
        est.converged = false;
        est.value = n > 0 ? seq.back() : cplx(0.0, 0.0);
        return est;
    }
    double scale = 0.0;
    for (const cplx& a : seq)
        scale = std::max(scale, std::abs(a));
    const cplx d_last = seq[n - 1] - seq[n - 2];
    const cplx d_prev = seq[n - 2] - seq[n - 3];
    if (std::abs(d_last) <= 1e-12 * std::max(1.0, scale)) {
        est.value = seq[n - 1];
        est.rate = std::numeric_limits<double>::infinity();
        est.converged = true;
        return est;
    }
    const cplx q = d_last / d_prev;
    if (!(std::abs(q) < 0.97)) {
        est.value = seq[n - 1];
        est.rate = std::numeric_limits<double>::quiet_NaN();
        est.converged = false;
        return est;
    }
    est.value = seq[n - 1] + d_last * q / (1.0 - q);
    est.rate = -std::log2(std::abs(q));
    est.converged = true;
    return est;
}

} // namespace

SingularLimits singular_limits(const MetricDescriptor& m) {
    std::vector<cplx> conn_seq, schw_seq;
    if (m.is_closed_form()) {
        for (int j = 2; j <= 40; ++j) {
            const cplx z(std::exp2(-j), 0.0);
            conn_seq.push_back(z * connection_at(m, z));
            schw_seq.push_back(z * z * schwarzian_at(m, z));
        }
    } else {
        const GridSampled& gs = *m.as_grid_sampled();
        const PolarGrid& g = gs.u.grid();
        const Field gamma_field = connection(m, g);
        const Field schw_field = schwarzian(m, g);
        const int jmax = static_cast<int>(std::floor(-std::log(g.inner_radius()) /
                                                     std::numbers::ln2));
        for (int j = 2; j <= jmax; ++j) {
            const double t = -static_cast<double>(j) * std::numbers::ln2;
            const double rho = std::exp2(-j);
            const cplx z(rho, 0.0);
            conn_seq.push_back(z * interpolate(gamma_field, t, 0.0));
            schw_seq.push_back(z * z * interpolate(schw_field, t, 0.0));
        }
        if (conn_seq.size() < 3)
            throw PreconditionError("singular_limits: annulus too shallow for dyadic radii");
    }
    SingularLimits lims;
    lims.connection = extrapolate_dyadic(conn_seq);
    lims.schwarzian = extrapolate_dyadic(schw_seq);
    return lims;
}

LaurentSpectrum laurent_spectrum(const std::vector<cplx>& samples, double radius,
                                 std::size_t max_index) {
    const std::size_t m = samples.size();
    if (!(radius > 0.0) || radius > 1.0)
        throw PreconditionError("laurent_spectrum: radius must lie in (0,1]");
    if (m < 2 * max_index + 2)
        throw PreconditionError("laurent_spectrum: need at least 2N+2 samples");

    const std::vector<cplx> bins = dft(samples);
    const auto n_max = static_cast<long long>(max_index);

    LaurentSpectrum spec;
    spec.radius = radius;
    spec.max_index = n_max;
    spec.coeffs.resize(2 * max_index + 1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (long long n = -n_max; n <= n_max; ++n) {
        const std::size_t bin =
            static_cast<std::size_t>(((n % static_cast<long long>(m)) + static_cast<long long>(m)) %
                                     static_cast<long long>(m));
        spec.coeffs[static_cast<std::size_t>(n + n_max)] =
            bins[bin] * inv_m * std::pow(radius, -static_cast<double>(n));
    }

    if (n_max >= 1) {
        double largest = 0.0;
        for (const cplx& b : spec.coeffs)
            largest = std::max(largest, std::abs(b));
        const double trailing =
            std::max(std::max(std::abs(spec.coeff(n_max)), std::abs(spec.coeff(n_max - 1))),
                     std::max(std::abs(spec.coeff(-n_max)), std::abs(spec.coeff(-n_max + 1))));
        spec.aliasing_warning = largest > 0.0 && trailing > 1e-8 * largest;
    }
    return spec;
}

ParsevalResult parseval_energy(const LaurentSpectrum& spec, double gamma) {
    double largest = 0.0;
    for (const cplx& b : spec.coeffs)
        largest = std::max(largest, std::abs(b));
    const double zero_threshold = 1e-12 * largest;

    ParsevalResult res;
    double sum = 0.0;
    for (long long n = -spec.max_index; n <= spec.max_index; ++n) {
        const double bn = std::abs(spec.coeff(n));
        if (bn <= zero_threshold)
            continue;
        const double denom = 2.0 * static_cast<double>(n) + 2.0 * gamma + 2.0;
        if (denom <= 1e-9) { // n <= -1 - gamma: the radial integral diverges
            res.divergent = true;
            res.value = std::numeric_limits<double>::infinity();
            return res;
        }
        sum += bn * bn / denom;
    }
    res.value = kTwoPi * sum;
    return res;
}

double remainder_smoothness(const MetricDescriptor& m, double gamma_hat) {
    // moderate radii only: at tiny rho the (gamma - gamma_hat) log rho
    // residue of the fitted order would swamp the remainder itself
    const int j_lo = 2;
    int j_hi = 8;
    if (const GridSampled* gs = m.as_grid_sampled())
        j_hi = std::min(
            j_hi, static_cast<int>(std::floor(-std::log(gs->u.grid().inner_radius()) /
                                              std::numbers::ln2)));
    if (j_hi - j_lo < 3)
        return std::numeric_limits<double>::quiet_NaN();

    constexpr std::size_t n_theta = 64;
    std::vector<double> mean_seq_t;
    std::vector<cplx> mean_seq;
    std::vector<std::vector<double>> rvals(static_cast<std::size_t>(j_hi - j_lo + 1),
                                           std::vector<double>(n_theta));
    for (int j = j_lo; j <= j_hi; ++j) {
        const double rho = std::exp2(-j);
        double mean = 0.0;
        for (std::size_t a = 0; a < n_theta; ++a) {
            const double th = kTwoPi * static_cast<double>(a) / n_theta;
            const double r =
                m.log_density(std::polar(rho, th)) - gamma_hat * std::log(rho);
            rvals[static_cast<std::size_t>(j - j_lo)][a] = r;
            mean += r;
        }
        mean_seq.push_back(cplx(mean / n_theta, 0.0));
        mean_seq_t.push_back(std::log(rho));
    }
    const LimitEstimate r0 = extrapolate_dyadic(mean_seq);

    std::vector<double> xs, ys;
    for (int j = j_lo; j <= j_hi; ++j) {
        double dev = 0.0;
        for (double r : rvals[static_cast<std::size_t>(j - j_lo)])
            dev = std::max(dev, std::abs(r - r0.value.real()));
        if (dev > 1e-12) {
            xs.push_back(mean_seq_t[static_cast<std::size_t>(j - j_lo)]);
            ys.push_back(std::log(dev));
        }
    }
    if (xs.size() < 3)
        return std::numeric_limits<double>::quiet_NaN();
    return least_squares(xs, ys).slope;
}

SingularityReport analyze(const MetricDescriptor& m, const CurvatureSpec& k, const PolarGrid& g) {
    const Field u = sample_metric(m, g);
    const GammaFit fit = fit_gamma(u);
    const EnergyResult en = energy(u);
    const SingularLimits lims = singular_limits(m);
    const DecompositionReport dec = verify_decomposition(u, k);

    SingularityReport rep;
    rep.gamma_hat = fit.gamma_hat;
    rep.gamma_stderr = fit.stderr_value;
    rep.connection_limit = lims.connection.value;
    rep.schwarzian_limit = lims.schwarzian.value;
    rep.limits_converged = lims.connection.converged && lims.schwarzian.converged;
    rep.energy_value = en.value;
    rep.energy_divergent = en.divergent;
    rep.remainder_smoothness = remainder_smoothness(m, fit.gamma_hat);
    rep.decomposition_laplace_defect = dec.laplace_defect;
    rep.decomposition_mvp_defect = dec.mvp_defect;

    rep.pass_expansion = fit.gamma_hat > -1.0 && !en.divergent && !dec.quadrature_divergence;
    const double target_b = -fit.gamma_hat * (2.0 + fit.gamma_hat) / 2.0;
    rep.pass_connection_limit = rep.limits_converged &&
                           std::abs(rep.connection_limit - cplx(fit.gamma_hat, 0.0)) <=
                               kLimitTolerance;
    rep.pass_schwarzian_limit = rep.limits_converged &&
                           std::abs(rep.schwarzian_limit - cplx(target_b, 0.0)) <= kLimitTolerance;
    return rep;
}

} // namespace conical
