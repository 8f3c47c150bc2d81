#pragma once

#include "conical/field.hpp"
#include "conical/metric.hpp"

#include <string>
#include <vector>

namespace conical {

struct GammaFit {
    double gamma_hat = 0.0;
    double stderr_value = 0.0;
    std::size_t window = 0; // number of inner radial levels used
};

/// Least-squares slope of the circle means of u against log(rho) over the
/// inner half of the radial levels.  Circle averaging removes the angular
/// content of the remainder, whose mean tends to a constant.
GammaFit fit_gamma(const Field& u);

struct EnergyResult {
    double value = 0.0; // +inf when divergent
    bool divergent = false;
    double gamma_used = 0.0;
    double tail = 0.0; // extrapolated contribution of |z| < eps
};

/// Quadrature of e^{2u} over the annulus plus a gamma-extrapolated tail
/// below eps.  Divergent when the fitted order is <= -1, when the inward
/// level masses stop decaying, or on overflow.
EnergyResult energy(const Field& u);

struct DecompositionReport {
    /// max over the interior window of |(d_tt + d_thth) h|, the harmonic
    /// defect of h = u - gamma log|z| - v in the log-polar chart.
    double laplace_defect = 0.0;
    /// Fitted slope of the circle means of h against log rho: the amplitude
    /// of any log|z| term left in h.  A disk-harmonic h has constant means
    /// across the puncture, slope 0.
    double mvp_defect = 0.0;
    double gamma_hat = 0.0;
    bool quadrature_divergence = false;

    double defect() const { return laplace_defect > mvp_defect ? laplace_defect : mvp_defect; }
};

/// Checks u = gamma log|z| + h + v with v the Newton potential of k e^{2u}
/// and h harmonic across the puncture.
DecompositionReport verify_decomposition(const Field& u, const CurvatureSpec& k);

struct LimitEstimate {
    cplx value{0.0, 0.0};
    double rate = 0.0; // estimated order in rho (log2 of the dyadic ratio)
    bool converged = false;
};

struct SingularLimits {
    LimitEstimate connection; // lim z Gamma(z)
    LimitEstimate schwarzian; // lim z^2 S(z)
};

/// Evaluates z Gamma and z^2 S along dyadic radii at theta = 0 and
/// Richardson-extrapolates with a rate estimated from the data.
SingularLimits singular_limits(const MetricDescriptor& m);

struct LaurentSpectrum {
    double radius = 0.0;
    long long max_index = 0;
    std::vector<cplx> coeffs; // b_n at coeffs[n + max_index], n in [-N, N]
    bool aliasing_warning = false;

    cplx coeff(long long n) const { return coeffs[static_cast<std::size_t>(n + max_index)]; }
};

/// Laurent coefficients b_n = rho^{-n} (DFT of circle samples)_n / M.
LaurentSpectrum laurent_spectrum(const std::vector<cplx>& samples, double radius,
                                 std::size_t max_index);

struct ParsevalResult {
    double value = 0.0;
    bool divergent = false;
};

/// 2 pi sum |b_n|^2 / (2n + 2 gamma + 2), the exact area integral of
/// |z|^{2 gamma} |sum b_n z^n|^2 over the disk; divergent as soon as some
/// retained coefficient has n <= -1 - gamma.
ParsevalResult parseval_energy(const LaurentSpectrum& spec, double gamma);

/// Empirical Hoelder-type exponent of the remainder r = u - gamma log|z| on
/// shrinking circles (slope of log max-deviation against log rho).  NaN when
/// the remainder is constant to rounding.  Diagnostic only.
double remainder_smoothness(const MetricDescriptor& m, double gamma_hat);

struct SingularityReport {
    double gamma_hat = 0.0;
    double gamma_stderr = 0.0;
    cplx connection_limit{0.0, 0.0};
    cplx schwarzian_limit{0.0, 0.0};
    bool limits_converged = false;
    double energy_value = 0.0;
    bool energy_divergent = false;
    double remainder_smoothness = 0.0; // NaN when not measurable
    double decomposition_laplace_defect = 0.0;
    double decomposition_mvp_defect = 0.0;
    bool pass_expansion = false;
    bool pass_connection_limit = false;
    bool pass_schwarzian_limit = false;
    std::string input_digest;
};

/// Tolerance used by the limit pass flags.
inline constexpr double kLimitTolerance = 1e-3;

/// Full analysis pipeline: gamma fit, energy, singular limits,
/// decomposition check, smoothness diagnostic, pass flags.
SingularityReport analyze(const MetricDescriptor& m, const CurvatureSpec& k, const PolarGrid& g);

/// Deterministic JSON rendering of the report (ordered keys; NaN/inf map to
/// null).
std::string report_to_json(const SingularityReport& report);

} // namespace conical
