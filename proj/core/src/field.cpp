#include "conical/field.hpp"

#include "conical/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conical {

Field::Field(PolarGrid grid, FieldKind kind)
    : grid_(std::move(grid)), kind_(kind), values_(grid_.n_nodes(), cplx(0.0, 0.0)) {}

Field::Field(PolarGrid grid, FieldKind kind, std::vector<cplx> values)
    : grid_(std::move(grid)), kind_(kind), values_(std::move(values)) {
    if (values_.size() != grid_.n_nodes())
        throw PreconditionError("Field: value count does not match grid node count");
}

void Field::validate() const {
    for (const cplx& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw PreconditionError("Field: non-finite entry");
    }
}

Field make_real_field(const PolarGrid& g, const std::function<double(double, double)>& f) {
    Field out(g, FieldKind::Real);
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            out.at(i, j) = cplx(f(g.radius(i), g.theta(j)), 0.0);
    return out;
}

Field make_complex_field(const PolarGrid& g, const std::function<cplx(cplx)>& f) {
    Field out(g, FieldKind::Complex);
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            out.at(i, j) = f(g.node(i, j));
    return out;
}

double circle_mean(const Field& f, std::size_t i) {
    double sum = 0.0;
    const std::size_t na = f.grid().n_angular();
    for (std::size_t j = 0; j < na; ++j)
        sum += f.real_at(i, j);
    return sum / static_cast<double>(na);
}

cplx interpolate(const Field& f, double t, double theta) {
    const PolarGrid& g = f.grid();
    const double t0 = g.t(0);
    const double slack = 1e-12 * (1.0 - t0);
    if (t < t0 - slack || t > slack)
        throw PreconditionError("interpolate: t outside the grid range");
    t = std::clamp(t, t0, 0.0);

    const double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0)
        theta += two_pi;

    const double fi = (t - t0) / g.dt();
    const double fj = theta / g.dtheta();
    const std::size_t i = std::min(static_cast<std::size_t>(fi), g.n_radial() - 2);
    const std::size_t j = std::min(static_cast<std::size_t>(fj), g.n_angular() - 1);
    const double wi = fi - static_cast<double>(i);
    const double wj = fj - static_cast<double>(j);
    const std::size_t jp = (j + 1) % g.n_angular();

    return (1.0 - wi) * ((1.0 - wj) * f.at(i, j) + wj * f.at(i, jp)) +
           wi * ((1.0 - wj) * f.at(i + 1, j) + wj * f.at(i + 1, jp));
}

} // namespace conical
