#include "doctest.h"

#include "qtrace/cli/commands.hpp"
#include "qtrace/parametrix/calculus.hpp"

#include <complex>
#include <fstream>
#include <sstream>
#include <string>

using namespace qtrace;
using namespace qtrace::cli;
using nlohmann::json;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(QTRACE_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

complex as_complex(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

bool close(complex got, complex want) { return std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)); }

void compare(const std::string& key, const std::vector<IdentityReport>& reports, const json& frozen) {
    REQUIRE(reports.size() == frozen.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& want = frozen[i];
        CHECK(reports[i].identity == want["identity"].get<std::string>());
        REQUIRE(reports[i].checks.size() == want["checks"].size());
        for (std::size_t k = 0; k < reports[i].checks.size(); ++k) {
            const auto& got = reports[i].checks[k];
            const auto& exp = want["checks"][k];
            INFO(key << " / " << got.name);
            CHECK(got.name == exp["name"].get<std::string>());
            CHECK(close(got.lhs, as_complex(exp["lhs"])));
            CHECK(close(got.rhs, as_complex(exp["rhs"])));
        }
    }
}

}  // namespace

TEST_CASE("resolvent expansion of -d^2 + 2 + cos x matches the stored prefix form") {
    const auto p = param::DifferentialOperator::from_symbol(sym::parse_prefix("(add (pow xi1 2) 2 (cos 1 x1))"), 1);
    std::string want = slurp("resolvent_v2cos_depth3.txt");
    while (!want.empty() && (want.back() == '\n' || want.back() == ' ')) want.pop_back();
    CHECK(param::resolvent_expansion(p, 3).to_prefix() == want);
}

TEST_CASE("command presets reproduce frozen values") {
    const json frozen = json::parse(slurp("oracle_values.json"));
    for (const auto& name : command_names()) {
        if (name == "verify-all") continue;
        REQUIRE(frozen.contains(name));
        compare(name, run_command(RunConfig::defaults(name)).reports, frozen[name]);
    }
}

TEST_CASE("acceptance criteria reproduce frozen values") {
    const json frozen = json::parse(slurp("oracle_values.json"));
    for (const auto& c : acceptance_criteria()) {
        const std::string key = "criterion-" + std::to_string(c.id);
        REQUIRE(frozen.contains(key));
        compare(key, c.run(), frozen[key]);
    }
}
