#include "conical/runner.hpp"

#include "conical/asymptotics.hpp"
#include "conical/diffops.hpp"
#include "conical/digest.hpp"
#include "conical/errors.hpp"
#include "conical/field_io.hpp"
#include "conical/potentials.hpp"
#include "conical/solver.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace conical {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ordered_json finite_or_null(double x) {
    return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

struct Context {
    json cfg;
    fs::path config_dir;
    fs::path out_dir;
    int refine = 0;
};

fs::path resolve(const Context& ctx, const std::string& path) {
    fs::path p(path);
    return p.is_absolute() ? p : ctx.config_dir / p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot open " + path.string() + " for writing");
    out << text;
}

PolarGrid parse_grid(const json& j) {
    if (!j.contains("grid"))
        throw PreconditionError("config: missing \"grid\"");
    const json& g = j.at("grid");
    return make_grid(g.at("epsilon").get<double>(), g.at("n_radial").get<std::size_t>(),
                     g.at("n_angular").get<std::size_t>());
}

PolarGrid refined(const PolarGrid& g, int level) {
    const auto factor = static_cast<std::size_t>(1) << level;
    return make_grid(g.inner_radius(), (g.n_radial() - 1) * factor + 1,
                     g.n_angular() * factor);
}

MetricDescriptor parse_metric(const Context& ctx, const PolarGrid& g) {
    if (!ctx.cfg.contains("metric"))
        throw PreconditionError("config: missing \"metric\"");
    const json& m = ctx.cfg.at("metric");
    const std::string type = m.at("type").get<std::string>();
    if (type == "spherical")
        return MetricDescriptor(SphericalLiouville{m.at("beta").get<double>()});
    if (type == "flat") {
        HarmonicPolynomial h;
        h.c0 = m.value("c0", 0.0);
        if (m.contains("cos"))
            h.cos_coeffs = m.at("cos").get<std::vector<double>>();
        if (m.contains("sin"))
            h.sin_coeffs = m.at("sin").get<std::vector<double>>();
        return MetricDescriptor(PowerLawFlat{m.at("gamma").get<double>(), std::move(h)});
    }
    if (type == "sampled") {
        Field u = read_field_csv(resolve(ctx, m.at("field").get<std::string>()).string());
        std::optional<double> hint;
        if (m.contains("gamma_hint"))
            hint = m.at("gamma_hint").get<double>();
        return MetricDescriptor(GridSampled{std::move(u), hint});
    }
    if (type == "essential")
        return essential_singularity_metric(g);
    throw PreconditionError("config: unknown metric type '" + type + "'");
}

CurvatureSpec parse_curvature(const Context& ctx, const PolarGrid& g) {
    if (ctx.cfg.contains("curvature")) {
        const json& c = ctx.cfg.at("curvature");
        const std::string type = c.at("type").get<std::string>();
        if (type == "constant")
            return CurvatureSpec::constant(c.at("k").get<double>());
        if (type == "sampled") {
            Field k = read_field_csv(resolve(ctx, c.at("field").get<std::string>()).string());
            if (!(k.grid() == g))
                throw PreconditionError("config: sampled curvature grid mismatch");
            return CurvatureSpec::sampled(std::move(k));
        }
        throw PreconditionError("config: unknown curvature type '" + type + "'");
    }
    // defaults by metric family: the Liouville families have k = -4, flat 0
    const std::string mtype =
        ctx.cfg.contains("metric") ? ctx.cfg.at("metric").at("type").get<std::string>() : "";
    if (mtype == "spherical" || mtype == "essential")
        return CurvatureSpec::constant(-4.0);
    if (mtype == "flat")
        return CurvatureSpec::constant(0.0);
    throw PreconditionError("config: \"curvature\" required for sampled metrics");
}

std::string input_digest(const Context& ctx, const MetricDescriptor* m) {
    std::ostringstream ss;
    ss << ctx.cfg.value("command", "");
    if (ctx.cfg.contains("grid"))
        ss << "|grid:" << ctx.cfg.at("grid").dump();
    if (ctx.cfg.contains("metric")) {
        json red = ctx.cfg.at("metric");
        red.erase("field");
        ss << "|metric:" << red.dump();
    }
    if (ctx.cfg.contains("curvature")) {
        json red = ctx.cfg.at("curvature");
        red.erase("field");
        ss << "|curvature:" << red.dump();
    }
    ss << "|seed:" << ctx.cfg.value("seed", 0LL);
    if (m != nullptr) {
        if (const GridSampled* gs = m->as_grid_sampled()) {
            ss << "|u:";
            for (const cplx& v : gs->u.values())
                ss << fmt(v.real()) << ',';
        }
    }
    return digest_hex(ss.str());
}

SolverConfig parse_solver_config(const Context& ctx) {
    SolverConfig cfg;
    if (!ctx.cfg.contains("solver"))
        return cfg;
    const json& s = ctx.cfg.at("solver");
    cfg.tolerance = s.value("tolerance", cfg.tolerance);
    cfg.max_steps = s.value("max_steps", cfg.max_steps);
    cfg.damping = s.value("damping", cfg.damping);
    cfg.linear_tolerance = s.value("linear_tolerance", cfg.linear_tolerance);
    if (s.contains("gamma_hint"))
        cfg.gamma_hint = s.at("gamma_hint").get<double>();
    const std::string guess = s.value("initial_guess", "zero");
    if (guess == "zero")
        cfg.guess = InitialGuess::Zero;
    else if (guess == "gamma_log")
        cfg.guess = InitialGuess::GammaLog;
    else
        throw PreconditionError("config: unknown initial_guess '" + guess + "'");
    return cfg;
}

BoundaryData parse_boundary(const Context& ctx, const PolarGrid& g,
                            const MetricDescriptor* metric) {
    if (!ctx.cfg.contains("boundary")) {
        if (metric != nullptr)
            return BoundaryData::from_metric(*metric, g);
        throw PreconditionError("config: missing \"boundary\"");
    }
    const json& b = ctx.cfg.at("boundary");
    const std::string type = b.at("type").get<std::string>();
    if (type == "from_metric") {
        if (metric == nullptr)
            throw PreconditionError("config: boundary from_metric needs a metric");
        return BoundaryData::from_metric(*metric, g);
    }
    if (type == "csv")
        return read_boundary_csv(resolve(ctx, b.at("path").get<std::string>()).string(), g);
    if (type == "constant")
        return BoundaryData::constant(b.at("inner").get<double>(), b.at("outer").get<double>(),
                                      g);
    throw PreconditionError("config: unknown boundary type '" + type + "'");
}

void write_profile_csv(const MetricDescriptor& m, const PolarGrid& g, const fs::path& path) {
    const Field u = sample_metric(m, g);
    const Field conn = connection(m, g);
    const Field schw = schwarzian(m, g);
    std::ostringstream out;
    out << "rho,u_mean,z_gamma_re,z_gamma_im,z2_schwarzian_re,z2_schwarzian_im\n";
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double rho = g.radius(i);
        const cplx zg = rho * conn.at(i, 0);
        const cplx zs = rho * rho * schw.at(i, 0);
        out << fmt(rho) << ',' << fmt(circle_mean(u, i)) << ',' << fmt(zg.real()) << ','
            << fmt(zg.imag()) << ',' << fmt(zs.real()) << ',' << fmt(zs.imag()) << '\n';
    }
    write_text(path, out.str());
}

int report_exit_code(const SingularityReport& rep) {
    if (rep.energy_divergent)
        return kExitDivergence;
    if (!(rep.pass_expansion && rep.pass_connection_limit && rep.pass_schwarzian_limit))
        return kExitNonConvergence;
    return kExitOk;
}

int cmd_analyze(const Context& ctx) {
    const json& mcfg = ctx.cfg.at("metric");
    const std::string mtype = mcfg.at("type").get<std::string>();

    if (mtype == "sampled") {
        // the field fixes the grid; refinement would need resampling
        if (ctx.refine > 0)
            throw PreconditionError("analyze --refine is not available for sampled metrics");
        MetricDescriptor m = parse_metric(ctx, make_grid(0.5, 3, 4));
        const PolarGrid g = m.as_grid_sampled()->u.grid();
        const CurvatureSpec k = parse_curvature(ctx, g);
        SingularityReport rep = analyze(m, k, g);
        rep.input_digest = input_digest(ctx, &m);
        write_text(ctx.out_dir / "report.json", report_to_json(rep));
        write_profile_csv(m, g, ctx.out_dir / "profile.csv");
        return report_exit_code(rep);
    }

    const PolarGrid base = parse_grid(ctx.cfg);
    if (ctx.refine <= 0) {
        const MetricDescriptor m = parse_metric(ctx, base);
        const CurvatureSpec k = parse_curvature(ctx, base);
        SingularityReport rep = analyze(m, k, base);
        rep.input_digest = input_digest(ctx, &m);
        write_text(ctx.out_dir / "report.json", report_to_json(rep));
        write_profile_csv(m, base, ctx.out_dir / "profile.csv");
        return report_exit_code(rep);
    }

    std::ostringstream out;
    out << "level,n_radial,n_angular,gamma_hat,defect,defect_order\n";
    double prev_defect = 0.0;
    int code = kExitOk;
    for (int level = 0; level < ctx.refine; ++level) {
        const PolarGrid g = refined(base, level);
        const MetricDescriptor m = parse_metric(ctx, g);
        const CurvatureSpec k = parse_curvature(ctx, g);
        SingularityReport rep = analyze(m, k, g);
        const double defect =
            std::max(rep.decomposition_laplace_defect, rep.decomposition_mvp_defect);
        out << level << ',' << g.n_radial() << ',' << g.n_angular() << ','
            << fmt(rep.gamma_hat) << ',' << fmt(defect) << ',';
        if (level > 0 && defect > 0.0)
            out << fmt(std::log2(prev_defect / defect));
        out << '\n';
        prev_defect = defect;
        code = report_exit_code(rep);
    }
    write_text(ctx.out_dir / "refinement.csv", out.str());
    return code;
}

void write_iteration_log(const Context& ctx, const SolveResult& res, const SolverConfig& cfg,
                         const PolarGrid& g) {
    std::ostringstream out;
    ordered_json meta;
    meta["command"] = "solve";
    meta["epsilon"] = g.inner_radius();
    meta["n_radial"] = g.n_radial();
    meta["n_angular"] = g.n_angular();
    meta["tolerance"] = cfg.tolerance;
    meta["max_steps"] = cfg.max_steps;
    meta["initial_guess"] = cfg.guess == InitialGuess::Zero ? "zero" : "gamma_log";
    meta["gamma_hint"] = cfg.gamma_hint ? ordered_json(*cfg.gamma_hint) : ordered_json(nullptr);
    meta["boundary_note"] = "Dirichlet data selects one solution; the inner circle stands in "
                            "for the singularity";
    meta["converged"] = res.converged;
    out << meta.dump() << '\n';
    for (const NewtonStep& s : res.log) {
        ordered_json line;
        line["step"] = s.step;
        line["residual"] = s.residual;
        line["damping"] = s.damping;
        line["correction"] = s.correction;
        out << line.dump() << '\n';
    }
    write_text(ctx.out_dir / "iterations.jsonl", out.str());
}

int cmd_solve(const Context& ctx) {
    const PolarGrid base = parse_grid(ctx.cfg);
    std::optional<MetricDescriptor> metric;
    if (ctx.cfg.contains("metric"))
        metric = parse_metric(ctx, base);
    const SolverConfig scfg = parse_solver_config(ctx);

    if (ctx.refine <= 0) {
        const CurvatureSpec k = parse_curvature(ctx, base);
        const BoundaryData bc = parse_boundary(ctx, base, metric ? &*metric : nullptr);
        const SolveResult res = solve(k, bc, base, scfg);
        write_field_csv(res.u, (ctx.out_dir / "solution.csv").string());
        write_iteration_log(ctx, res, scfg, base);
        return res.converged ? kExitOk : kExitNonConvergence;
    }

    std::ostringstream out;
    out << "level,n_radial,n_angular,steps,final_residual,error,error_order\n";
    double prev_err = 0.0;
    bool last_converged = false;
    for (int level = 0; level < ctx.refine; ++level) {
        const PolarGrid g = refined(base, level);
        std::optional<MetricDescriptor> m_level;
        if (ctx.cfg.contains("metric"))
            m_level = parse_metric(ctx, g);
        const CurvatureSpec k = parse_curvature(ctx, g);
        const BoundaryData bc = parse_boundary(ctx, g, m_level ? &*m_level : nullptr);
        const SolveResult res = solve(k, bc, g, scfg);
        last_converged = res.converged;

        double err = std::numeric_limits<double>::quiet_NaN();
        if (m_level && m_level->is_closed_form()) {
            const Field exact = sample_metric(*m_level, g);
            err = 0.0;
            for (std::size_t idx = 0; idx < exact.size(); ++idx)
                err = std::max(err, std::abs(res.u[idx].real() - exact[idx].real()));
        }
        out << level << ',' << g.n_radial() << ',' << g.n_angular() << ',' << res.log.size()
            << ',' << fmt(res.final_residual) << ',' << fmt(err) << ',';
        if (level > 0 && std::isfinite(err) && err > 0.0 && prev_err > 0.0)
            out << fmt(std::log2(prev_err / err));
        out << '\n';
        prev_err = err;
    }
    write_text(ctx.out_dir / "refinement.csv", out.str());
    return last_converged ? kExitOk : kExitNonConvergence;
}

int cmd_pullback(const Context& ctx) {
    const PolarGrid base = parse_grid(ctx.cfg);
    const unsigned order = ctx.cfg.at("pullback").at("order").get<unsigned>();

    const int levels = ctx.refine > 0 ? ctx.refine : 1;
    std::ostringstream table;
    table << "level,n_radial,n_angular,rule_residual\n";
    double residual = std::numeric_limits<double>::quiet_NaN();
    ordered_json summary;
    for (int level = 0; level < levels; ++level) {
        const PolarGrid g = refined(base, level);
        const MetricDescriptor m = parse_metric(ctx, g);
        const MetricDescriptor pb = pullback(m, order, g);
        if (m.is_closed_form())
            residual = check_transformation_rules(m, order, g);
        if (level == 0) {
            write_field_csv(pb.as_grid_sampled()->u, (ctx.out_dir / "pullback.csv").string());
            summary["order"] = order;
            const auto gstar = pb.conical_order();
            summary["gamma_star"] = gstar ? ordered_json(*gstar) : ordered_json(nullptr);
        }
        table << level << ',' << g.n_radial() << ',' << g.n_angular() << ',' << fmt(residual)
              << '\n';
    }
    summary["rule_residual"] = finite_or_null(residual);
    write_text(ctx.out_dir / "pullback.json", summary.dump(2) + "\n");
    if (ctx.refine > 0)
        write_text(ctx.out_dir / "refinement.csv", table.str());
    return kExitOk;
}

Density parse_density(const Context& ctx, const PolarGrid& g) {
    const json& p = ctx.cfg.at("potential");
    const json& d = p.at("density");
    const bool radial = d.value("radial", false);
    if (d.contains("constant")) {
        std::vector<double> values(g.n_nodes(), d.at("constant").get<double>());
        return Density(g, std::move(values), radial);
    }
    Field f = read_field_csv(resolve(ctx, d.at("field").get<std::string>()).string());
    if (!(f.grid() == g))
        throw PreconditionError("config: density field grid mismatch");
    return density_from_field(f, radial);
}

int cmd_potential(const Context& ctx) {
    const PolarGrid base = parse_grid(ctx.cfg);
    const json& p = ctx.cfg.at("potential");
    const std::string kind = p.value("kind", "newton");
    if (kind != "newton" && kind != "green")
        throw PreconditionError("config: potential kind must be newton or green");

    const int levels = ctx.refine > 0 ? ctx.refine : 1;
    std::ostringstream table;
    table << "level,n_radial,n_angular,value_at_zero,field_delta,delta_order\n";
    std::optional<Field> prev;
    double prev_delta = 0.0;
    int code = kExitOk;
    for (int level = 0; level < levels; ++level) {
        const PolarGrid g = refined(base, level);
        const Density f = parse_density(ctx, g);
        const PotentialResult res =
            kind == "newton" ? newton_potential(f, g) : green_potential(f, g);

        double delta = std::numeric_limits<double>::quiet_NaN();
        if (prev) {
            delta = 0.0;
            const PolarGrid& gc = prev->grid();
            for (std::size_t i = 0; i < gc.n_radial(); ++i)
                for (std::size_t j = 0; j < gc.n_angular(); ++j)
                    delta = std::max(delta, std::abs(res.values.real_at(2 * i, 2 * j) -
                                                     prev->real_at(i, j)));
        }
        table << level << ',' << g.n_radial() << ',' << g.n_angular() << ','
              << fmt(res.value_at_zero) << ',' << fmt(delta) << ',';
        if (level > 1 && delta > 0.0 && prev_delta > 0.0)
            table << fmt(std::log2(prev_delta / delta));
        table << '\n';

        if (level == 0) {
            write_field_csv(res.values, (ctx.out_dir / "potential.csv").string());
            ordered_json summary;
            summary["kind"] = kind;
            summary["value_at_zero"] = res.value_at_zero;
            summary["inner_cutoff"] = res.inner_cutoff;
            summary["divergence_suspected"] = res.divergence_suspected;
            if (p.contains("p")) {
                const ProbeResult probe = brezis_merle_probe(f, p.at("p").get<double>());
                ordered_json pj;
                pj["p"] = p.at("p").get<double>();
                pj["value"] = finite_or_null(probe.value);
                pj["refinement_ratio"] = finite_or_null(probe.refinement_ratio);
                pj["overflowed"] = probe.overflowed;
                summary["probe"] = pj;
                if (probe.overflowed)
                    code = kExitDivergence;
            }
            write_text(ctx.out_dir / "potential.json", summary.dump(2) + "\n");
            if (res.divergence_suspected)
                code = kExitDivergence;
        }
        prev = res.values;
        prev_delta = delta;
    }
    if (ctx.refine > 0)
        write_text(ctx.out_dir / "refinement.csv", table.str());
    return code;
}

int cmd_spectrum(const Context& ctx) {
    const json& s = ctx.cfg.at("spectrum");
    const double radius = s.at("radius").get<double>();
    const std::size_t max_index = s.at("max_index").get<std::size_t>();

    std::vector<cplx> samples;
    if (s.contains("samples")) {
        samples = read_circle_samples_csv(resolve(ctx, s.at("samples").get<std::string>()).string());
    } else if (s.contains("generator")) {
        const std::string gen = s.at("generator").get<std::string>();
        const std::size_t n = s.value("n_samples", std::size_t{128});
        samples.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(j) /
                              static_cast<double>(n);
            const cplx z = std::polar(radius, th);
            if (gen == "exp_z")
                samples[j] = std::exp(z);
            else if (gen == "exp_inv_z")
                samples[j] = std::exp(1.0 / z);
            else
                throw PreconditionError("config: unknown spectrum generator '" + gen + "'");
        }
    } else {
        throw PreconditionError("config: spectrum needs \"samples\" or \"generator\"");
    }

    const LaurentSpectrum spec = laurent_spectrum(samples, radius, max_index);
    ordered_json out;
    out["radius"] = radius;
    out["max_index"] = max_index;
    out["aliasing_warning"] = spec.aliasing_warning;
    ordered_json coeffs = ordered_json::array();
    for (long long n = -spec.max_index; n <= spec.max_index; ++n) {
        ordered_json c;
        c["n"] = n;
        c["re"] = spec.coeff(n).real();
        c["im"] = spec.coeff(n).imag();
        coeffs.push_back(c);
    }
    out["coefficients"] = coeffs;

    int code = kExitOk;
    if (s.contains("gamma")) {
        const ParsevalResult pe = parseval_energy(spec, s.at("gamma").get<double>());
        ordered_json pj;
        pj["gamma"] = s.at("gamma").get<double>();
        pj["value"] = pe.divergent ? ordered_json(nullptr) : finite_or_null(pe.value);
        pj["divergent"] = pe.divergent;
        out["parseval"] = pj;
        if (pe.divergent)
            code = kExitDivergence;
    }
    write_text(ctx.out_dir / "spectrum.json", out.dump(2) + "\n");
    return code;
}

} // namespace

int run_command(const RunOptions& options) {
    try {
        Context ctx;
        {
            std::ifstream in(options.config_path);
            if (!in) {
                std::cerr << "conical: cannot open config " << options.config_path << "\n";
                return kExitPrecondition;
            }
            in >> ctx.cfg;
        }
        ctx.config_dir = fs::absolute(fs::path(options.config_path)).parent_path();
        ctx.out_dir = options.out_dir;
        ctx.refine = options.refine;
        fs::create_directories(ctx.out_dir);

        const std::string command = ctx.cfg.at("command").get<std::string>();
        if (!options.expected_command.empty() && command != options.expected_command) {
            std::cerr << "conical: config command '" << command << "' does not match '"
                      << options.expected_command << "'\n";
            return kExitPrecondition;
        }
        if (command == "analyze")
            return cmd_analyze(ctx);
        if (command == "solve")
            return cmd_solve(ctx);
        if (command == "pullback")
            return cmd_pullback(ctx);
        if (command == "potential")
            return cmd_potential(ctx);
        if (command == "spectrum")
            return cmd_spectrum(ctx);
        std::cerr << "conical: unknown command '" << command << "'\n";
        return kExitPrecondition;
    } catch (const PreconditionError& e) {
        std::cerr << "conical: precondition: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const NonConvergenceError& e) {
        std::cerr << "conical: non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "conical: config: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "conical: " << e.what() << "\n";
        return 1;
    }
}

} // namespace conical
