#include "conical/asymptotics.hpp"
#include "conical/digest.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>

namespace conical {

std::string digest_hex(std::string_view s) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(s)));
    return std::string("fnv1a:") + buf;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json finite_or_null(double x) {
    if (std::isfinite(x))
        return x;
    return nullptr;
}

ordered_json complex_json(cplx z) {
    ordered_json j;
    j["re"] = finite_or_null(z.real());
    j["im"] = finite_or_null(z.imag());
    return j;
}

} // namespace

std::string report_to_json(const SingularityReport& report) {
    ordered_json j;
    j["gamma_hat"] = finite_or_null(report.gamma_hat);
    j["gamma_stderr"] = finite_or_null(report.gamma_stderr);
    j["connection_limit"] = complex_json(report.connection_limit);
    j["schwarzian_limit"] = complex_json(report.schwarzian_limit);
    j["limits_converged"] = report.limits_converged;
    j["energy"] = report.energy_divergent ? ordered_json(nullptr)
                                          : finite_or_null(report.energy_value);
    j["energy_divergent"] = report.energy_divergent;
    j["remainder_smoothness"] = finite_or_null(report.remainder_smoothness);
    j["decomposition_laplace_defect"] = finite_or_null(report.decomposition_laplace_defect);
    j["decomposition_mvp_defect"] = finite_or_null(report.decomposition_mvp_defect);
    j["pass_expansion"] = report.pass_expansion;
    j["pass_connection_limit"] = report.pass_connection_limit;
    j["pass_schwarzian_limit"] = report.pass_schwarzian_limit;
    j["input_digest"] = report.input_digest;
    return j.dump(2) + "\n";
}

} // namespace conical
