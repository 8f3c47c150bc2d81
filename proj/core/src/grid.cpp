#include "conical/grid.hpp"

#include "conical/errors.hpp"

#include <numbers>

namespace conical {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

PolarGrid::PolarGrid(double inner_radius, std::size_t n_radial, std::size_t n_angular)
    : inner_radius_(inner_radius), n_radial_(n_radial), n_angular_(n_angular) {
    if (!(inner_radius > 0.0) || !(inner_radius < 1.0))
        throw PreconditionError("PolarGrid: inner radius must lie in (0,1)");
    if (n_radial < 3)
        throw PreconditionError("PolarGrid: need at least 3 radial levels");
    if (n_angular < 4 || !is_power_of_two(n_angular))
        throw PreconditionError("PolarGrid: n_angular must be a power of two >= 4");

    const double t0 = std::log(inner_radius);
    const auto m = static_cast<double>(n_radial - 1);
    dt_ = -t0 / m;
    dtheta_ = 2.0 * std::numbers::pi / static_cast<double>(n_angular);

    t_.resize(n_radial);
    rho_.resize(n_radial);
    for (std::size_t i = 0; i < n_radial; ++i) {
        // t0 * (m - i) / m puts the last level at exactly t = 0.
        t_[i] = t0 * (m - static_cast<double>(i)) / m;
        rho_[i] = std::exp(t_[i]);
    }
    rho_[0] = inner_radius;
    rho_[n_radial - 1] = 1.0;
}

PolarGrid make_grid(double inner_radius, std::size_t n_radial, std::size_t n_angular) {
    return PolarGrid(inner_radius, n_radial, n_angular);
}

} // namespace conical
