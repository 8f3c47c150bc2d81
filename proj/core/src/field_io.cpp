#include "conical/field_io.hpp"

#include "conical/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace conical {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  const std::string& expected_header) {
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw PreconditionError(path + ": empty file");
    if (line != expected_header)
        throw PreconditionError(path + ": expected header '" + expected_header + "'");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw PreconditionError(path + ": non-numeric cell '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_field_csv(const Field& f, const std::string& path) {
    const PolarGrid& g = f.grid();
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot open " + path + " for writing");
    out << "rho,theta,re,im\n";
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const cplx v = f.at(i, j);
            out << fmt(g.radius(i)) << ',' << fmt(g.theta(j)) << ',' << fmt(v.real()) << ','
                << fmt(v.imag()) << '\n';
        }
}

Field read_field_csv(const std::string& path) {
    const auto rows = read_numeric_csv(path, "rho,theta,re,im");
    if (rows.empty())
        throw PreconditionError(path + ": no data rows");
    for (const auto& r : rows)
        if (r.size() != 4)
            throw PreconditionError(path + ": malformed row");

    const double eps = rows.front()[0];
    std::size_t na = 0;
    while (na < rows.size() && rows[na][0] == eps)
        ++na;
    if (na == 0 || rows.size() % na != 0)
        throw PreconditionError(path + ": rows are not radial-major blocks");
    const std::size_t nr = rows.size() / na;

    const PolarGrid g = make_grid(eps, nr, na);
    std::vector<cplx> values(rows.size());
    bool all_real = true;
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const auto& r = rows[i * na + j];
            if (std::abs(r[0] - g.radius(i)) > 1e-12 * g.radius(i) ||
                std::abs(r[1] - g.theta(j)) > 1e-9)
                throw PreconditionError(path + ": node coordinates are not log-uniform");
            values[g.index(i, j)] = cplx(r[2], r[3]);
            if (r[3] != 0.0)
                all_real = false;
        }
    }
    Field f(g, all_real ? FieldKind::Real : FieldKind::Complex, std::move(values));
    f.validate();
    return f;
}

void write_boundary_csv(const BoundaryData& bc, const PolarGrid& g, const std::string& path) {
    bc.validate(g);
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot open " + path + " for writing");
    out << "theta,inner,outer\n";
    for (std::size_t j = 0; j < g.n_angular(); ++j)
        out << fmt(g.theta(j)) << ',' << fmt(bc.inner[j]) << ',' << fmt(bc.outer[j]) << '\n';
}

BoundaryData read_boundary_csv(const std::string& path, const PolarGrid& g) {
    const auto rows = read_numeric_csv(path, "theta,inner,outer");
    if (rows.size() != g.n_angular())
        throw PreconditionError(path + ": row count must equal n_angular");
    BoundaryData bc;
    bc.inner.resize(rows.size());
    bc.outer.resize(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != 3)
            throw PreconditionError(path + ": malformed row");
        bc.inner[j] = rows[j][1];
        bc.outer[j] = rows[j][2];
    }
    bc.validate(g);
    return bc;
}

void write_circle_samples_csv(const std::vector<cplx>& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot open " + path + " for writing");
    out << "theta,re,im\n";
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j)
        out << fmt(dtheta * static_cast<double>(j)) << ',' << fmt(samples[j].real()) << ','
            << fmt(samples[j].imag()) << '\n';
}

std::vector<cplx> read_circle_samples_csv(const std::string& path) {
    const auto rows = read_numeric_csv(path, "theta,re,im");
    if (rows.empty())
        throw PreconditionError(path + ": no samples");
    std::vector<cplx> samples(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != 3)
            throw PreconditionError(path + ": malformed row");
        samples[j] = cplx(rows[j][1], rows[j][2]);
    }
    return samples;
}

} // namespace conical
