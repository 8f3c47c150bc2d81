#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace conical {

using cplx = std::complex<double>;

/// Log-radial x angular discretization of the annulus eps < |z| <= 1.
///
/// Radial levels are uniform in t = log(rho), from log(eps) up to 0, so the
/// outermost level sits exactly on the unit circle.  Angles are equispaced
/// with n_angular a power of two (the angular direction is differentiated
/// and convolved spectrally).  Nodes are stored radial-major: node (i, j)
/// has flat index i * n_angular + j.
class PolarGrid {
public:
    PolarGrid(double inner_radius, std::size_t n_radial, std::size_t n_angular);

    double inner_radius() const { return inner_radius_; }
    std::size_t n_radial() const { return n_radial_; }
    std::size_t n_angular() const { return n_angular_; }
    std::size_t n_nodes() const { return n_radial_ * n_angular_; }

    /// t = log(rho) of radial level i; t(n_radial-1) is exactly 0.
    double t(std::size_t i) const { return t_[i]; }
    double radius(std::size_t i) const { return rho_[i]; }
    double theta(std::size_t j) const { return dtheta_ * static_cast<double>(j); }

    double dt() const { return dt_; }
    double dtheta() const { return dtheta_; }

    std::size_t index(std::size_t i, std::size_t j) const { return i * n_angular_ + j; }

    cplx node(std::size_t i, std::size_t j) const {
        const double th = theta(j);
        return cplx(rho_[i] * std::cos(th), rho_[i] * std::sin(th));
    }

    const std::vector<double>& t_levels() const { return t_; }
    const std::vector<double>& radii() const { return rho_; }

    bool operator==(const PolarGrid& other) const {
        return inner_radius_ == other.inner_radius_ && n_radial_ == other.n_radial_ &&
               n_angular_ == other.n_angular_;
    }
    bool operator!=(const PolarGrid& other) const { return !(*this == other); }

private:
    double inner_radius_;
    std::size_t n_radial_;
    std::size_t n_angular_;
    double dt_;
    double dtheta_;
    std::vector<double> t_;
    std::vector<double> rho_;
};

/// Build a grid, rejecting parameters that violate the type invariants
/// (eps outside (0,1), n_radial < 3, n_angular < 4 or not a power of two).
PolarGrid make_grid(double inner_radius, std::size_t n_radial, std::size_t n_angular);

bool is_power_of_two(std::size_t n);

} // namespace conical
