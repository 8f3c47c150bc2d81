#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conical/diffops.hpp"
#include "conical/errors.hpp"
#include "conical/potentials.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace conical;

namespace {

Density constant_density(const PolarGrid& g, double value, bool radial) {
    return Density(g, std::vector<double>(g.n_nodes(), value), radial);
}

double max_err_vs_parabola(const Field& v) {
    const PolarGrid& g = v.grid();
    double err = 0.0;
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double rho = g.radius(i);
        const double exact = (rho * rho - 1.0) / 4.0;
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            err = std::max(err, std::abs(v.real_at(i, j) - exact));
    }
    return err;
}

} // namespace

TEST_CASE("green function of the disk") {
    // g_D(0, zeta) = -log|zeta|
    CHECK(green_function(cplx(0.0, 0.0), cplx(0.3, 0.4)) ==
          doctest::Approx(-std::log(0.5)).epsilon(1e-14));
    // hand-evaluated pair
    CHECK(green_function(cplx(0.5, 0.0), cplx(-0.5, 0.0)) ==
          doctest::Approx(std::log(1.25)).epsilon(1e-14));

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> radius(0.05, 0.95);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const cplx z = std::polar(radius(rng), angle(rng));
        const cplx w = std::polar(radius(rng), angle(rng));
        if (z == w)
            continue;
        const double a = green_function(z, w);
        const double b = green_function(w, z);
        CHECK(a >= 0.0);
        CHECK(std::abs(a - b) < 1e-13);
    }
    CHECK_THROWS_AS(green_function(cplx(0.5, 0.1), cplx(0.5, 0.1)), PreconditionError);
}

TEST_CASE("newton potential of the zero density") {
    const PolarGrid g = make_grid(0.1, 17, 16);
    const PotentialResult res = newton_potential(constant_density(g, 0.0, false), g);
    for (const cplx& v : res.values.values())
        CHECK(v.real() == 0.0);
    CHECK(res.value_at_zero == 0.0);
    CHECK_FALSE(res.divergence_suspected);
}

TEST_CASE("newton potential of the unit density matches (|z|^2-1)/4") {
    // 2-D singular quadrature path
    double prev = 0.0;
    for (std::size_t level = 0; level < 3; ++level) {
        const std::size_t nr = 32 * (1u << level) + 1;
        const std::size_t na = 32 << level;
        const PolarGrid g = make_grid(3e-4, nr, na);
        const PotentialResult res = newton_potential(constant_density(g, 1.0, false), g);
        const double err = max_err_vs_parabola(res.values);
        if (level > 0)
            CHECK(prev / err > 2.0); // empirical order >= 1
        prev = err;
    }
    CHECK(prev < 1e-3);

    // radial fast path: cell integrals are exact for a constant density
    const PolarGrid g = make_grid(3e-4, 257, 8);
    const PotentialResult res = newton_potential(constant_density(g, 1.0, true), g);
    CHECK(max_err_vs_parabola(res.values) < 1e-5);
    CHECK(res.value_at_zero == doctest::Approx(-0.25).epsilon(1e-5));
}

TEST_CASE("newton potential at zero for the half-disk indicator") {
    // v(0) = -(log 2)/8 - 1/16 for the indicator of |zeta| < 1/2
    const double target = -std::log(2.0) / 8.0 - 1.0 / 16.0;
    for (const std::size_t nr : {201u, 401u}) {
        const PolarGrid g = make_grid(std::exp2(-10), nr, 8);
        std::vector<double> vals(g.n_nodes());
        for (std::size_t i = 0; i < g.n_radial(); ++i) {
            const double rho = g.radius(i);
            const double f = rho < 0.5 - 1e-12 ? 1.0 : (std::abs(rho - 0.5) < 1e-12 ? 0.5 : 0.0);
            for (std::size_t j = 0; j < g.n_angular(); ++j)
                vals[g.index(i, j)] = f;
        }
        const PotentialResult res = newton_potential(Density(g, vals, true), g);
        CHECK(std::abs(res.value_at_zero - target) < (nr == 201 ? 1e-4 : 1e-6));
    }
}

TEST_CASE("green potential sign and harmonic difference") {
    // zero density: q identically zero
    {
        const PolarGrid g0 = make_grid(0.1, 9, 8);
        const PotentialResult q0 = green_potential(constant_density(g0, 0.0, false), g0);
        for (const cplx& v : q0.values.values())
            CHECK(v.real() == 0.0);
    }

    // q <= 0 whenever f <= 0, at every node
    const PolarGrid g = make_grid(0.01, 65, 64);
    const Density f = constant_density(g, -1.0, false);
    const PotentialResult q = green_potential(f, g);
    for (const cplx& v : q.values.values())
        CHECK(v.real() <= 0.0);

    // q + v is discretely harmonic away from the boundary ring
    double defect_coarse = 0.0, defect_fine = 0.0;
    for (std::size_t level = 0; level < 3; ++level) {
        const std::size_t nr = 32 * (1u << level) + 1;
        const std::size_t na = 32 << level;
        const PolarGrid gl = make_grid(0.01, nr, na);
        const Density fl = constant_density(gl, -1.0, false);
        const Field ql = green_potential(fl, gl).values;
        const Field vl = newton_potential(fl, gl).values;
        Field w(gl, FieldKind::Real);
        for (std::size_t idx = 0; idx < w.size(); ++idx)
            w[idx] = ql[idx] + vl[idx];
        const Field lap = laplacian(w);
        double defect = 0.0;
        for (std::size_t i = 2; i + 2 < gl.n_radial(); ++i) {
            if (gl.radius(i) > 0.9)
                continue;
            for (std::size_t j = 0; j < gl.n_angular(); ++j)
                defect = std::max(defect, std::abs(lap.real_at(i, j)));
        }
        if (level == 0)
            defect_coarse = defect;
        defect_fine = defect;
    }
    CHECK(defect_fine < defect_coarse / 10.0);
    CHECK(defect_fine < 1e-4);
}

TEST_CASE("laplacian of the newton potential reproduces the density") {
    double prev = 0.0;
    for (std::size_t level = 0; level < 3; ++level) {
        const std::size_t nr = 32 * (1u << level) + 1;
        const std::size_t na = 32 << level;
        const PolarGrid g = make_grid(0.05, nr, na);
        std::vector<double> vals(g.n_nodes());
        for (std::size_t i = 0; i < g.n_radial(); ++i)
            for (std::size_t j = 0; j < g.n_angular(); ++j)
                vals[g.index(i, j)] = 1.0 + g.radius(i) * g.radius(i);
        const PotentialResult res = newton_potential(Density(g, vals, false), g);
        const Field lap = laplacian(res.values);
        double err = 0.0;
        for (std::size_t i = 2; i + 2 < g.n_radial(); ++i)
            for (std::size_t j = 0; j < g.n_angular(); ++j)
                err = std::max(err, std::abs(lap.real_at(i, j) - vals[g.index(i, j)]));
        if (level > 0)
            CHECK(prev / err > 2.0); // empirical order >= 1 (measures ~2)
        prev = err;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("cross-grid evaluation agrees with same-grid evaluation") {
    const PolarGrid g = make_grid(0.05, 33, 32);
    const Density f = constant_density(g, 1.0, false);
    const PotentialResult same = newton_potential(f, g);
    // evaluate on a rotated-resolution grid sharing the annulus
    const PolarGrid eval = make_grid(0.05, 17, 16);
    const PotentialResult cross = newton_potential(f, eval);
    double err = 0.0;
    for (std::size_t i = 0; i < eval.n_radial(); ++i)
        for (std::size_t j = 0; j < eval.n_angular(); ++j)
            err = std::max(err, std::abs(cross.values.real_at(i, j) -
                                         same.values.real_at(2 * i, 2 * j)));
    CHECK(err < 2e-3);
}

TEST_CASE("divergence heuristic flags non-integrable densities") {
    const PolarGrid g = make_grid(1e-3, 65, 16);
    std::vector<double> vals(g.n_nodes());
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            vals[g.index(i, j)] = 1.0 / (g.radius(i) * g.radius(i));
    CHECK(newton_potential(Density(g, vals, true), g).divergence_suspected);
    CHECK_FALSE(newton_potential(constant_density(g, 1.0, true), g).divergence_suspected);
}

TEST_CASE("brezis-merle probe") {
    CHECK_THROWS_AS(brezis_merle_probe(constant_density(make_grid(0.5, 5, 8), 1.0, true), 0.0),
                    PreconditionError);

    const PolarGrid g = make_grid(3e-4, 513, 8);
    // f == 0: the probe returns the area of the annulus ~ pi
    const ProbeResult zero = brezis_merle_probe(constant_density(g, 0.0, true), 3.0);
    CHECK(std::abs(zero.value - std::numbers::pi) < 1e-6);

    // f == 1, p = 4: pi (e - 1); p = 2: 2 pi (sqrt(e) - 1)
    const Density one = constant_density(g, 1.0, true);
    const ProbeResult p4 = brezis_merle_probe(one, 4.0);
    CHECK(std::abs(p4.value - std::numbers::pi * (std::exp(1.0) - 1.0)) < 1e-4);
    CHECK(std::abs(p4.refinement_ratio - 1.0) < 1e-3);
    CHECK_FALSE(p4.overflowed);

    const ProbeResult p2 = brezis_merle_probe(one, 2.0);
    CHECK(std::abs(p2.value - 2.0 * std::numbers::pi * (std::exp(0.5) - 1.0)) < 1e-4);

    // large p on a strong density overflows into the divergence report
    const ProbeResult big = brezis_merle_probe(one, 4000.0);
    CHECK(big.overflowed);
}
