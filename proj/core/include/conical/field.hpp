#pragma once

#include "conical/grid.hpp"

#include <functional>
#include <vector>

namespace conical {

enum class FieldKind { Real, Complex };

/// Scalar samples on the nodes of a PolarGrid, radial-major.
///
/// Values are stored as complex doubles; a Real field keeps all imaginary
/// parts at zero.  Fields are immutable after construction apart from the
/// raw value access used by the builders in this header.
class Field {
public:
    Field(PolarGrid grid, FieldKind kind);
    Field(PolarGrid grid, FieldKind kind, std::vector<cplx> values);

    const PolarGrid& grid() const { return grid_; }
    FieldKind kind() const { return kind_; }

    std::size_t size() const { return values_.size(); }

    const cplx& operator[](std::size_t flat) const { return values_[flat]; }
    cplx& operator[](std::size_t flat) { return values_[flat]; }

    const cplx& at(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
    cplx& at(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }

    double real_at(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)].real(); }

    const std::vector<cplx>& values() const { return values_; }

    /// Throws PreconditionError if any entry is non-finite.
    void validate() const;

private:
    PolarGrid grid_;
    FieldKind kind_;
    std::vector<cplx> values_;
};

Field make_real_field(const PolarGrid& g, const std::function<double(double rho, double theta)>& f);
Field make_complex_field(const PolarGrid& g, const std::function<cplx(cplx z)>& f);

/// Mean over the angular nodes of radial level i (fixed summation order).
double circle_mean(const Field& f, std::size_t i);

/// Bilinear interpolation in (t, theta); theta wraps, t must lie within the
/// grid range up to a tiny slack.  Exact at the nodes.
cplx interpolate(const Field& f, double t, double theta);

} // namespace conical
