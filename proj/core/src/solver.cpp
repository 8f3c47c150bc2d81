#include "conical/solver.hpp"

#include "conical/errors.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>

namespace conical {

BoundaryData BoundaryData::from_metric(const MetricDescriptor& m, const PolarGrid& g) {
    BoundaryData bc;
    bc.inner.resize(g.n_angular());
    bc.outer.resize(g.n_angular());
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
        bc.inner[j] = m.log_density(g.node(0, j));
        bc.outer[j] = m.log_density(g.node(g.n_radial() - 1, j));
    }
    return bc;
}

BoundaryData BoundaryData::constant(double inner_value, double outer_value, const PolarGrid& g) {
    BoundaryData bc;
    bc.inner.assign(g.n_angular(), inner_value);
    bc.outer.assign(g.n_angular(), outer_value);
    return bc;
}

void BoundaryData::validate(const PolarGrid& g) const {
    if (inner.size() != g.n_angular() || outer.size() != g.n_angular())
        throw PreconditionError("BoundaryData: lengths must equal n_angular");
    for (double v : inner)
        if (!std::isfinite(v))
            throw PreconditionError("BoundaryData: non-finite inner value");
    for (double v : outer)
        if (!std::isfinite(v))
            throw PreconditionError("BoundaryData: non-finite outer value");
}

namespace {

void check_curvature(const CurvatureSpec& k, const PolarGrid& g) {
    if (!k.is_constant() && !(k.samples().grid() == g))
        throw PreconditionError("solver: sampled curvature must live on the solve grid");
}

void apply_boundary(Field& u, const BoundaryData& bc) {
    const PolarGrid& g = u.grid();
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
        u.at(0, j) = cplx(bc.inner[j], 0.0);
        u.at(g.n_radial() - 1, j) = cplx(bc.outer[j], 0.0);
    }
}

// 5-point stencil pieces: Lu = (d_tt + d_theta theta) u, so that
// Delta u = e^{-2t} Lu on the uniform (t, theta) lattice.
double stencil_l(const Field& u, std::size_t i, std::size_t j, double inv_dt2, double inv_dth2) {
    const PolarGrid& g = u.grid();
    const std::size_t na = g.n_angular();
    const std::size_t jm = (j + na - 1) % na;
    const std::size_t jp = (j + 1) % na;
    const double c = u.real_at(i, j);
    return (u.real_at(i + 1, j) - 2.0 * c + u.real_at(i - 1, j)) * inv_dt2 +
           (u.real_at(i, jp) - 2.0 * c + u.real_at(i, jm)) * inv_dth2;
}

} // namespace

double solver_residual(const Field& u, const CurvatureSpec& k) {
    const PolarGrid& g = u.grid();
    const double inv_dt2 = 1.0 / (g.dt() * g.dt());
    const double inv_dth2 = 1.0 / (g.dtheta() * g.dtheta());
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < g.n_radial(); ++i) {
        const double e2t = std::exp(-2.0 * g.t(i));
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const double lap = e2t * stencil_l(u, i, j, inv_dt2, inv_dth2);
            const double rhs = k.value_at(i, j) * std::exp(2.0 * u.real_at(i, j));
            r = std::max(r, std::abs(lap - rhs));
        }
    }
    return r;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct LinearSystem {
    SpMat a;              // -(L - 2 k e^{2u+2t}), positive diagonal
    Eigen::VectorXd rhs;  // scaled residual L u - k e^{2u+2t}
};

LinearSystem assemble(const Field& u, const CurvatureSpec& k) {
    const PolarGrid& g = u.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    const auto n = static_cast<Eigen::Index>((nr - 2) * na);
    const double inv_dt2 = 1.0 / (g.dt() * g.dt());
    const double inv_dth2 = 1.0 / (g.dtheta() * g.dtheta());

    LinearSystem sys;
    sys.a.resize(n, n);
    sys.rhs.resize(n);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 5);

    auto unknown = [na](std::size_t i, std::size_t j) {
        return static_cast<Eigen::Index>((i - 1) * na + j);
    };

    for (std::size_t i = 1; i + 1 < nr; ++i) {
        const double e2t = std::exp(2.0 * g.t(i));
        for (std::size_t j = 0; j < na; ++j) {
            const Eigen::Index row = unknown(i, j);
            const double uij = u.real_at(i, j);
            const double source = k.value_at(i, j) * std::exp(2.0 * uij) * e2t;
            sys.rhs(row) = stencil_l(u, i, j, inv_dt2, inv_dth2) - source;

            // A = -(L - 2 k e^{2u+2t}); k <= 0 keeps the 2*source term <= 0.
            trip.emplace_back(row, row, 2.0 * inv_dt2 + 2.0 * inv_dth2 + 2.0 * source);
            // radial neighbours (boundary rows are data, not unknowns)
            if (i > 1)
                trip.emplace_back(row, unknown(i - 1, j), -inv_dt2);
            if (i + 2 < nr)
                trip.emplace_back(row, unknown(i + 1, j), -inv_dt2);
            const std::size_t jm = (j + na - 1) % na;
            const std::size_t jp = (j + 1) % na;
            trip.emplace_back(row, unknown(i, jm), -inv_dth2);
            trip.emplace_back(row, unknown(i, jp), -inv_dth2);
        }
    }
    sys.a.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

Field solve_linear(const Field& u, const CurvatureSpec& k, double linear_tolerance) {
    const PolarGrid& g = u.grid();
    const std::size_t nr = g.n_radial();
    const std::size_t na = g.n_angular();
    LinearSystem sys = assemble(u, k);

    Eigen::SparseLU<SpMat> lu;
    lu.compute(sys.a);
    if (lu.info() != Eigen::Success)
        throw NonConvergenceError("linearized_step: sparse factorization failed");
    Eigen::VectorXd delta = lu.solve(sys.rhs);
    if (lu.info() != Eigen::Success)
        throw NonConvergenceError("linearized_step: linear solve failed");

    const double rhs_norm = sys.rhs.norm();
    if (rhs_norm > 0.0) {
        // normwise backward error ||A x - b|| / (||A|| ||x|| + ||b||), with
        // iterative refinement against the cached factorization
        double anorm = 0.0;
        for (int col = 0; col < sys.a.outerSize(); ++col) {
            double colsum = 0.0;
            for (SpMat::InnerIterator it(sys.a, col); it; ++it)
                colsum += std::abs(it.value());
            anorm = std::max(anorm, colsum); // symmetric pattern: 1-norm == inf-norm
        }
        auto backward_error = [&](const Eigen::VectorXd& x) {
            return (sys.a * x - sys.rhs).norm() / (anorm * x.norm() + rhs_norm);
        };
        double rel = backward_error(delta);
        for (int pass = 0; pass < 3 && rel > linear_tolerance; ++pass) {
            delta += lu.solve(sys.rhs - sys.a * delta);
            rel = backward_error(delta);
        }
        if (rel > linear_tolerance)
            throw NonConvergenceError("linearized_step: linear backward error above tolerance");
    }

    Field corr(g, FieldKind::Real);
    for (std::size_t i = 1; i + 1 < nr; ++i)
        for (std::size_t j = 0; j < na; ++j)
            corr.at(i, j) = cplx(delta(static_cast<Eigen::Index>((i - 1) * na + j)), 0.0);
    return corr;
}

Field initial_guess(const CurvatureSpec&, const BoundaryData& bc, const PolarGrid& g,
                    const SolverConfig& cfg) {
    Field u(g, FieldKind::Real);
    if (cfg.guess == InitialGuess::GammaLog) {
        const double gamma = cfg.gamma_hint.value_or(0.0);
        const double t0 = g.t(0);
        for (std::size_t i = 0; i < g.n_radial(); ++i) {
            const double s = 1.0 - g.t(i) / t0; // 0 at inner circle, 1 at outer
            for (std::size_t j = 0; j < g.n_angular(); ++j) {
                const double blend =
                    (1.0 - s) * (bc.inner[j] - gamma * t0) + s * bc.outer[j];
                u.at(i, j) = cplx(gamma * g.t(i) + blend, 0.0);
            }
        }
    }
    apply_boundary(u, bc);
    return u;
}

} // namespace

Field linearized_step(const Field& u, const CurvatureSpec& k, const BoundaryData& bc) {
    const PolarGrid& g = u.grid();
    bc.validate(g);
    check_curvature(k, g);
    Field pinned = u;
    apply_boundary(pinned, bc);
    pinned.validate();
    // delta solves (L - 2 k e^{2u+2t}) delta = -(L u - k e^{2u+2t}); the
    // assembled matrix is the negated operator, so the sign comes out here.
    Field corr = solve_linear(pinned, k, 1e-12);
    return corr;
}

SolveResult solve(const CurvatureSpec& k, const BoundaryData& bc, const PolarGrid& g,
                  const SolverConfig& cfg) {
    if (!(cfg.tolerance > 0.0))
        throw PreconditionError("solve: tolerance must be positive");
    if (!(cfg.damping > 0.0) || cfg.damping > 1.0)
        throw PreconditionError("solve: damping factor must lie in (0,1]");
    bc.validate(g);
    check_curvature(k, g);

    SolveResult res{initial_guess(k, bc, g, cfg), {}, false, 0.0};
    double residual = solver_residual(res.u, k);
    if (residual <= cfg.tolerance) {
        res.converged = true;
        res.final_residual = residual;
        return res;
    }

    for (std::size_t step = 1; step <= cfg.max_steps; ++step) {
        const Field delta = solve_linear(res.u, k, cfg.linear_tolerance);

        double lambda = cfg.damping;
        Field candidate = res.u;
        double cand_residual = residual;
        bool accepted = false;
        while (lambda > 1e-9) {
            candidate = res.u;
            for (std::size_t idx = 0; idx < candidate.size(); ++idx)
                candidate[idx] += lambda * delta[idx];
            cand_residual = solver_residual(candidate, k);
            if (std::isfinite(cand_residual) && cand_residual < residual) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            res.final_residual = residual;
            return res; // stalled; caller sees converged == false
        }

        double max_corr = 0.0;
        for (std::size_t idx = 0; idx < delta.size(); ++idx)
            max_corr = std::max(max_corr, lambda * std::abs(delta[idx].real()));

        res.u = std::move(candidate);
        residual = cand_residual;
        res.log.push_back(NewtonStep{step, residual, lambda, max_corr});
        if (residual <= cfg.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.final_residual = residual;
    return res;
}

} // namespace conical
