#pragma once

#include "conical/field.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace conical {

/// Finite Fourier--Taylor expansion of a harmonic function on the disk:
///   h(z) = c0 + sum_n ( cos_coeffs[n-1] * Re z^n + sin_coeffs[n-1] * Im z^n ).
/// Its analytic completion is phi(z) = c0 + sum_n (c_n - i s_n) z^n with
/// h = Re phi, so derivatives of h in z reduce to phi', phi''.
struct HarmonicPolynomial {
    double c0 = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    double eval(double rho, double theta) const;
    cplx phi_prime(cplx z) const;
    cplx phi_second(cplx z) const;
    std::size_t degree() const;
};

/// Metric e^{u}|dz| with developing map g(z) = z^beta and curvature +4:
///   u(z) = log beta + (beta - 1) log|z| - log(1 + |z|^{2 beta}).
/// Conical order gamma = beta - 1.
struct SphericalLiouville {
    double beta;
};

/// Flat metric u(z) = gamma log|z| + h(z) with h harmonic (k == 0).
struct PowerLawFlat {
    double gamma;
    HarmonicPolynomial h;
};

/// Metric known only through samples of u on a grid.  Point values between
/// nodes come from bilinear interpolation in (t, theta).
struct GridSampled {
    Field u;
    std::optional<double> gamma_hint;
};

class MetricDescriptor {
public:
    using Variant = std::variant<SphericalLiouville, PowerLawFlat, GridSampled>;

    explicit MetricDescriptor(SphericalLiouville m);
    explicit MetricDescriptor(PowerLawFlat m);
    explicit MetricDescriptor(GridSampled m);

    const Variant& variant() const { return v_; }

    bool is_closed_form() const { return !std::holds_alternative<GridSampled>(v_); }
    const GridSampled* as_grid_sampled() const { return std::get_if<GridSampled>(&v_); }

    /// Log-density u at a point of the punctured disk.  GridSampled
    /// descriptors require |z| inside their annulus (tiny slack allowed).
    double log_density(cplx z) const;

    /// Conical order: beta-1, gamma, or gamma_hint (nullopt for sampled
    /// descriptors without a hint).
    std::optional<double> conical_order() const;

private:
    Variant v_;
};

/// Curvature data for the right-hand side k(z) e^{2u}; all values must be
/// nonpositive.
class CurvatureSpec {
public:
    static CurvatureSpec constant(double k0);
    static CurvatureSpec sampled(Field k);

    bool is_constant() const { return !sampled_.has_value(); }
    double constant_value() const { return k0_; }
    const Field& samples() const { return *sampled_; }

    double value_at(std::size_t i, std::size_t j) const {
        return is_constant() ? k0_ : sampled_->real_at(i, j);
    }
    /// sup |k|
    double bound() const { return bound_; }

private:
    CurvatureSpec() = default;
    double k0_ = 0.0;
    double bound_ = 0.0;
    std::optional<Field> sampled_;
};

/// Samples of u = log(lambda) on the grid nodes.  Sampling a GridSampled
/// descriptor on its own grid returns the stored field bit-exactly.
Field sample_metric(const MetricDescriptor& m, const PolarGrid& g);

/// Grid-sampled metric built from the Liouville formula
/// u = log(|g'|/(1+|g|^2)) with g(z) = e^{1/z}, which has an essential
/// singularity at 0 (infinite-area negative example).
MetricDescriptor essential_singularity_metric(const PolarGrid& g);

} // namespace conical
