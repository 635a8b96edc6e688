#include "qtrace/report.hpp"

#include <algorithm>
#include <cmath>

namespace qtrace {

Check make_check(std::string name, complex lhs, complex rhs, double tol, bool relative, double floor) {
    Check c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.tol = tol;
    c.relative = relative;
    c.floor = floor;
    c.abs_err = std::abs(lhs - rhs);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    c.rel_err = scale > 0.0 ? c.abs_err / scale : 0.0;
    const double allowed = relative ? tol * std::max(scale, floor) : tol;
    c.pass = std::isfinite(c.abs_err) && c.abs_err <= allowed;
    return c;
}

void IdentityReport::add(const Check& c) {
    if (checks.empty()) {
        lhs = c.lhs;
        rhs = c.rhs;
        abs_err = c.abs_err;
        rel_err = c.rel_err;
        tol = c.tol;
    }
    checks.push_back(c);
    pass = all_pass();
}

bool IdentityReport::all_pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json complex_json(complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json to_json(const Check& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["lhs"] = complex_json(c.lhs);
    j["rhs"] = complex_json(c.rhs);
    j["abs_err"] = c.abs_err;
    j["rel_err"] = c.rel_err;
    j["tol"] = c.tol;
    j["mode"] = c.relative ? "relative" : "absolute";
    if (c.relative && c.floor > 0.0) j["floor"] = c.floor;
    j["pass"] = c.pass;
    return j;
}

nlohmann::json to_json(const IdentityReport& r) {
    nlohmann::json j;
    j["identity"] = r.identity;
    j["lhs"] = complex_json(r.lhs);
    j["rhs"] = complex_json(r.rhs);
    j["abs_err"] = r.abs_err;
    j["rel_err"] = r.rel_err;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    nlohmann::json b = r.breakdown;
    b["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) b["checks"].push_back(to_json(c));
    j["breakdown"] = b;
    return j;
}

}  // namespace qtrace
