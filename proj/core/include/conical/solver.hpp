#pragma once

#include "conical/field.hpp"
#include "conical/metric.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace conical {

/// Dirichlet data on the two boundary circles, one value per angular node.
struct BoundaryData {
    std::vector<double> inner;
    std::vector<double> outer;

    static BoundaryData from_metric(const MetricDescriptor& m, const PolarGrid& g);
    static BoundaryData constant(double inner_value, double outer_value, const PolarGrid& g);
    void validate(const PolarGrid& g) const;
};

enum class InitialGuess { Zero, GammaLog };

struct SolverConfig {
    /// Convergence threshold on max |Delta u - k e^{2u}| at interior nodes.
    double tolerance = 1e-10;
    std::size_t max_steps = 50;
    /// Starting damping factor per step, halved while the residual would grow.
    double damping = 1.0;
    InitialGuess guess = InitialGuess::Zero;
    /// Slope used by the GammaLog initial guess.
    std::optional<double> gamma_hint;
    /// Normwise backward error ||A x - b|| / (||A|| ||x|| + ||b||) required
    /// of each direct linear solve.
    double linear_tolerance = 1e-12;
};

struct NewtonStep {
    std::size_t step = 0;
    double residual = 0.0;   // after the step
    double damping = 0.0;    // accepted factor
    double correction = 0.0; // max |lambda * delta|
};

struct SolveResult {
    Field u;
    std::vector<NewtonStep> log;
    bool converged = false;
    double final_residual = 0.0;
};

/// Solve Delta u = k e^{2u} on the annulus with the given Dirichlet data by
/// damped Newton iteration.  The discretization is the 5-point second-order
/// stencil in (t, theta); each step solves the linearized system
/// (Delta - 2 k e^{2u}) delta = -(Delta u - k e^{2u}) by a sparse direct
/// factorization.  Boundary rows match bc exactly.
SolveResult solve(const CurvatureSpec& k, const BoundaryData& bc, const PolarGrid& g,
                  const SolverConfig& cfg);

/// One Newton correction around u (with boundary rows pinned to bc); the
/// correction vanishes on the boundary rows.
Field linearized_step(const Field& u, const CurvatureSpec& k, const BoundaryData& bc);

/// max |Delta u - k e^{2u}| over interior nodes for the solver's stencil.
double solver_residual(const Field& u, const CurvatureSpec& k);

} // namespace conical
