#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conical/asymptotics.hpp"
#include "conical/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace conical;

TEST_CASE("fit_gamma on exact and perturbed inputs") {
    const PolarGrid g = make_grid(1e-3, 129, 64);

    const Field pure = make_real_field(g, [](double rho, double) { return -0.5 * std::log(rho); });
    const GammaFit f0 = fit_gamma(pure);
    CHECK(std::abs(f0.gamma_hat + 0.5) < 1e-12);
    CHECK(f0.stderr_value < 1e-12);

    // the circle mean of Re z vanishes on equispaced angles
    const Field mixed = make_real_field(
        g, [](double rho, double th) { return 2.0 * std::log(rho) + rho * std::cos(th); });
    CHECK(std::abs(fit_gamma(mixed).gamma_hat - 2.0) < 1e-10);

    const PolarGrid g2 = make_grid(1e-4, 257, 64);
    const GammaFit f2 = fit_gamma(sample_metric(MetricDescriptor(SphericalLiouville{0.75}), g2));
    CHECK(std::abs(f2.gamma_hat + 0.25) < 1e-3);

    CHECK_THROWS_AS(fit_gamma(Field(make_grid(0.5, 3, 4), FieldKind::Real)), PreconditionError);
}

TEST_CASE("fit_gamma is exact on log plus zero-mean trigonometric fields") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    const PolarGrid g = make_grid(0.05, 33, 32);
    for (int trial = 0; trial < 5; ++trial) {
        const double gamma = dist(rng);
        const double a = dist(rng), b = dist(rng);
        const int k = 1 + (trial % 4);
        const Field u = make_real_field(g, [&](double rho, double th) {
            return gamma * std::log(rho) +
                   std::pow(rho, k) * (a * std::cos(k * th) + b * std::sin(k * th));
        });
        const GammaFit fit = fit_gamma(u);
        CHECK(std::abs(fit.gamma_hat - gamma) < 1e-12);
        CHECK(fit.stderr_value < 1e-12);
    }
}

TEST_CASE("energy of the spherical family converges to pi beta / 2") {
    for (const double beta : {0.5, 1.0, 2.0}) {
        const PolarGrid g = make_grid(1e-4, 1025, 8);
        const EnergyResult en = energy(sample_metric(MetricDescriptor(SphericalLiouville{beta}), g));
        CHECK_FALSE(en.divergent);
        CHECK(std::abs(en.value - std::numbers::pi * beta / 2.0) < 1e-4);
    }

    // beta = 1 with a deep grid reaches 1e-6 of pi/2
    const PolarGrid g = make_grid(1e-4, 2049, 8);
    const EnergyResult en = energy(sample_metric(MetricDescriptor(SphericalLiouville{1.0}), g));
    CHECK(std::abs(en.value - std::numbers::pi / 2.0) < 1e-6);
}

TEST_CASE("energy diverges exactly at the critical order") {
    const PolarGrid g = make_grid(1e-4, 513, 8);
    const Field u = make_real_field(g, [](double rho, double) { return -std::log(rho); });
    const EnergyResult en = energy(u);
    CHECK(en.divergent);
    CHECK(std::isinf(en.value));
}

TEST_CASE("energy of the flat identity metric is the disk area") {
    const PolarGrid g = make_grid(1e-3, 65, 8);
    const Field u(g, FieldKind::Real); // u == 0
    const EnergyResult en = energy(u);
    CHECK(std::abs(en.value - std::numbers::pi) < 1e-12); // quadrature + tail are exact here
}

TEST_CASE("verify_decomposition on the closed-form benchmarks") {
    // flat metric with k == 0: v vanishes, h is the harmonic part and the
    // defect is pure discretization error of h, shrinking at second order
    {
        HarmonicPolynomial h;
        h.cos_coeffs = {0.4};
        h.sin_coeffs = {0.0, 0.3};
        double prev = 0.0;
        for (std::size_t level = 0; level < 2; ++level) {
            const PolarGrid g = make_grid(1e-3, 64 * (1u << level) + 1, 32 << level);
            const Field u = sample_metric(MetricDescriptor(PowerLawFlat{0.5, h}), g);
            const DecompositionReport rep = verify_decomposition(u, CurvatureSpec::constant(0.0));
            CHECK(rep.laplace_defect < 2e-2);
            CHECK(rep.mvp_defect < 1e-10);
            CHECK(std::abs(rep.gamma_hat - 0.5) < 1e-10);
            if (level > 0)
                CHECK(prev / rep.laplace_defect > 3.0);
            prev = rep.laplace_defect;
        }
    }

    // genuinely conical benchmark: defect small and decreasing
    for (const double beta : {0.5, 1.0}) {
        double prev = 0.0;
        for (std::size_t level = 0; level < 2; ++level) {
            const std::size_t nr = 64 * (1u << level) + 1;
            const std::size_t na = 64 << level;
            const PolarGrid g = make_grid(1e-6, nr, na);
            const Field u = sample_metric(MetricDescriptor(SphericalLiouville{beta}), g);
            const DecompositionReport rep = verify_decomposition(u, CurvatureSpec::constant(-4.0));
            CHECK_FALSE(rep.quadrature_divergence);
            CHECK(rep.mvp_defect < 5e-4);
            if (level > 0)
                CHECK(prev / rep.laplace_defect > 2.0);
            prev = rep.laplace_defect;
        }
    }
}

TEST_CASE("singular limits on closed forms") {
    for (const double beta : {0.3, 0.5, 1.0, 2.0}) {
        const SingularLimits lims = singular_limits(MetricDescriptor(SphericalLiouville{beta}));
        const double gamma = beta - 1.0;
        REQUIRE(lims.connection.converged);
        REQUIRE(lims.schwarzian.converged);
        CHECK(std::abs(lims.connection.value - cplx(gamma, 0.0)) < 1e-3);
        CHECK(std::abs(lims.schwarzian.value - cplx(-gamma * (2.0 + gamma) / 2.0, 0.0)) < 1e-3);
    }
    const SingularLimits flat = singular_limits(MetricDescriptor(PowerLawFlat{1.0, {}}));
    CHECK(std::abs(flat.connection.value - cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(flat.schwarzian.value - cplx(-1.5, 0.0)) < 1e-12);
}

TEST_CASE("singular limits from a sampled metric") {
    const PolarGrid g = make_grid(1e-3, 257, 64);
    const MetricDescriptor closed(SphericalLiouville{0.5});
    const MetricDescriptor gs(GridSampled{sample_metric(closed, g), std::nullopt});
    const SingularLimits lims = singular_limits(gs);
    CHECK(std::abs(lims.connection.value - cplx(-0.5, 0.0)) < 5e-3);
    CHECK(std::abs(lims.schwarzian.value - cplx(0.375, 0.0)) < 5e-2);
}

TEST_CASE("laurent spectrum of reference functions") {
    const std::size_t m = 64;
    std::vector<cplx> ones(m, cplx(1.0, 0.0));
    const LaurentSpectrum sp0 = laurent_spectrum(ones, 0.5, 8);
    CHECK(std::abs(sp0.coeff(0) - cplx(1.0, 0.0)) < 1e-14);
    for (long long n = -8; n <= 8; ++n)
        if (n != 0)
            CHECK(std::abs(sp0.coeff(n)) < 1e-13);

    std::vector<cplx> se(m), si(m);
    for (std::size_t j = 0; j < m; ++j) {
        const cplx z = std::polar(0.5, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                           static_cast<double>(m));
        se[j] = std::exp(z);
        si[j] = std::exp(1.0 / z);
    }
    const LaurentSpectrum spe = laurent_spectrum(se, 0.5, 20);
    const LaurentSpectrum spi = laurent_spectrum(si, 0.5, 20);
    double fact = 1.0;
    for (int n = 0; n <= 20; ++n) {
        if (n > 0)
            fact *= n;
        CHECK(std::abs(spe.coeff(n) - cplx(1.0 / fact, 0.0)) < 1e-10);
        CHECK(std::abs(spi.coeff(-n) - cplx(1.0 / fact, 0.0)) < 1e-10);
    }
    for (int n = 1; n <= 20; ++n)
        CHECK(std::abs(spe.coeff(-n)) < 1e-12);
    CHECK_FALSE(spe.aliasing_warning);

    CHECK_THROWS_AS(laurent_spectrum(std::vector<cplx>(16, cplx(1.0, 0.0)), 0.5, 8),
                    PreconditionError);

    // degenerate single-coefficient request
    const LaurentSpectrum tiny = laurent_spectrum(std::vector<cplx>(4, cplx(2.0, 0.0)), 0.5, 0);
    CHECK(std::abs(tiny.coeff(0) - cplx(2.0, 0.0)) < 1e-14);

    // slowly decaying coefficients trip the aliasing warning
    std::vector<cplx> pole(m);
    for (std::size_t j = 0; j < m; ++j) {
        const cplx z = std::polar(0.5, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                           static_cast<double>(m));
        pole[j] = 1.0 / (1.0 - z / 0.55);
    }
    CHECK(laurent_spectrum(pole, 0.5, 20).aliasing_warning);
}

TEST_CASE("parseval energy: series, quadrature, divergence") {
    // single coefficient b_0 = 1 at gamma = 0 integrates to pi
    LaurentSpectrum sp;
    sp.radius = 0.5;
    sp.max_index = 2;
    sp.coeffs.assign(5, cplx(0.0, 0.0));
    sp.coeffs[2] = cplx(1.0, 0.0);
    const ParsevalResult unit = parseval_energy(sp, 0.0);
    CHECK_FALSE(unit.divergent);
    CHECK(std::abs(unit.value - std::numbers::pi) < 1e-14);

    // e^z: the coefficient series equals the area integral of |e^z|^2
    const std::size_t m = 64;
    std::vector<cplx> se(m);
    for (std::size_t j = 0; j < m; ++j)
        se[j] = std::exp(std::polar(0.5, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                             static_cast<double>(m)));
    const ParsevalResult pe = parseval_energy(laurent_spectrum(se, 0.5, 20), 0.0);
    double series = 0.0, fact = 1.0;
    for (int n = 0; n <= 20; ++n) {
        if (n > 0)
            fact *= n;
        series += 1.0 / (fact * fact * (2.0 * n + 2.0));
    }
    series *= 2.0 * std::numbers::pi;
    CHECK(std::abs(pe.value - series) < 1e-10);

    // independent 2-D route: quadrature of e^{2 Re z} over the disk
    const PolarGrid g = make_grid(1e-4, 2049, 64);
    const Field u = make_real_field(g, [](double rho, double th) { return rho * std::cos(th); });
    const EnergyResult quad = energy(u);
    CHECK(std::abs(pe.value - quad.value) < 1e-4);

    // any retained b_n with n <= -1-gamma diverges
    sp.coeffs[0] = cplx(0.5, 0.0); // b_{-2}
    CHECK(parseval_energy(sp, 0.0).divergent);
}

TEST_CASE("remainder smoothness diagnostic") {
    CHECK(std::abs(remainder_smoothness(MetricDescriptor(SphericalLiouville{0.5}), -0.5) - 1.0) <
          5e-2);
    CHECK(std::abs(remainder_smoothness(MetricDescriptor(SphericalLiouville{1.0}), 0.0) - 2.0) <
          5e-2);
    // constant remainder: nothing to measure
    CHECK(std::isnan(remainder_smoothness(MetricDescriptor(PowerLawFlat{0.3, {}}), 0.3)));
}

TEST_CASE("full analysis pipeline and report serialization") {
    const PolarGrid g = make_grid(1e-6, 129, 32);
    const MetricDescriptor m(SphericalLiouville{0.5});
    SingularityReport rep = analyze(m, CurvatureSpec::constant(-4.0), g);
    CHECK(std::abs(rep.gamma_hat + 0.5) < 1e-3);
    CHECK(rep.pass_expansion);
    CHECK(rep.pass_connection_limit);
    CHECK(rep.pass_schwarzian_limit);
    CHECK_FALSE(rep.energy_divergent);
    CHECK(std::abs(rep.schwarzian_limit.real() - 0.375) < 1e-3);

    rep.input_digest = "fnv1a:test";
    const std::string j1 = report_to_json(rep);
    const std::string j2 = report_to_json(rep);
    CHECK(j1 == j2);
    CHECK(j1.find("\"pass_expansion\": true") != std::string::npos);

    // the essential singularity example fails the energy test
    const PolarGrid ge = make_grid(0.01, 129, 128);
    const SingularityReport bad =
        analyze(essential_singularity_metric(ge), CurvatureSpec::constant(-4.0), ge);
    CHECK(bad.energy_divergent);
    CHECK_FALSE(bad.pass_expansion);
}
