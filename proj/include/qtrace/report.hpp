#pragma once

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

namespace qtrace {

using complex = std::complex<double>;

/// One compared pair. Relative checks scale the tolerance by
/// max(|lhs|, |rhs|, floor); absolute checks use it as is.
struct Check {
    std::string name;
    complex lhs{};
    complex rhs{};
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    bool relative = false;
    double floor = 0.0;
    bool pass = false;
};

Check make_check(std::string name, complex lhs, complex rhs, double tol, bool relative = false, double floor = 0.0);

/// Outcome of one identity: the headline comparison plus every sub-check.
struct IdentityReport {
    std::string identity;
    complex lhs{};
    complex rhs{};
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::vector<Check> checks;
    nlohmann::json breakdown = nlohmann::json::object();

    /// Records a sub-check; the first one added becomes the headline.
    void add(const Check& c);
    bool all_pass() const;
};

nlohmann::json complex_json(complex z);
nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const IdentityReport& r);

}  // namespace qtrace
