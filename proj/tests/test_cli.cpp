#include "doctest.h"

#include "qtrace/cli/commands.hpp"
#include "qtrace/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qtrace;
using namespace qtrace::cli;
using nlohmann::json;

namespace {

std::pair<int, int> config_error_at(const std::string& command, const std::string& text) {
    try {
        RunConfig::parse(command, text);
    } catch (const ConfigError& e) {
        return {e.line(), e.column()};
    }
    return {-1, -1};
}

}  // namespace

TEST_CASE("every command has a preset") {
    for (const auto& name : command_names()) {
        const auto cfg = RunConfig::defaults(name);
        CHECK(cfg.command() == name);
        CHECK(cfg.tree().contains("tolerances"));
    }
    CHECK_THROWS_AS(RunConfig::defaults("verify-everything"), UsageError);
}

TEST_CASE("unknown keys are rejected at their position") {
    CHECK(config_error_at("verify-t14", "geometry:\n  dim: 2\n  colour: red\n") == std::pair{3, 3});
    CHECK(config_error_at("fit", "depth: 4\nlamda:\n  mu_min: 1\n") == std::pair{2, 1});
}

TEST_CASE("type, enum and symbol errors carry positions") {
    CHECK(config_error_at("fit", "lambda: {mu_min: 10, mu_max: [1, 2]}\n").first == 1);
    CHECK(config_error_at("fit", "depth: 2.5\n") == std::pair{1, 8});
    CHECK(config_error_at("verify-t14", "geometry:\n  kind: sphere\n") == std::pair{2, 9});
    CHECK(config_error_at("verify-t14", "operators:\n  P: \"(add (pow xi1 2)\"\n").first == 2);
    CHECK(config_error_at("verify-t14", "geometry: [1\n").first >= 1);
}

TEST_CASE("missing config file is a config error") {
    CHECK_THROWS_AS(RunConfig::load("fit", "/nonexistent/run.yaml"), ConfigError);
}

TEST_CASE("user values overlay the preset and keep their marks") {
    const auto cfg = RunConfig::parse("fit", "lambda:\n  mu_min: 50\n");
    CHECK(cfg.number("lambda.mu_min") == 50.0);
    CHECK(cfg.mark("lambda.mu_min") == std::pair{2, 11});
    CHECK(cfg.mark("lambda.mu_max") == std::pair{0, 0});
    CHECK(cfg.number("lambda.mu_max") == RunConfig::defaults("fit").number("lambda.mu_max"));
}

TEST_CASE("scalar operator shorthand and powers") {
    const auto cfg = RunConfig::parse("verify-t14", "geometry: {dim: 1}\noperators:\n  P: \"(add (pow xi1 2) 1)\"\n");
    CHECK(cfg.has_operator("P"));
    CHECK(cfg.differential_operator("P").order() == 2);
    const auto sq = RunConfig::parse("verify-t14",
                                     "geometry: {dim: 1}\noperators:\n  P: {symbol: \"(add (pow xi1 2) 1)\", power: 2}\n");
    CHECK(sq.differential_operator("P").order() == 4);
}

TEST_CASE("operator order is measured when left blank") {
    auto cfg = RunConfig::defaults("verify-t23");
    cfg.set("geometry.dim", 1);
    cfg.set("operators.A.symbol", "absxi");
    cfg.set("operators.A.order", "");
    CHECK(cfg.symbol("A").order() == 1);
    cfg.set("operators.A.symbol", "(expi 1)");
    CHECK(cfg.symbol("A").order() == 0);
    cfg.set("operators.A.symbol", "(add (pow xi1 2) xi1)");
    CHECK_THROWS_AS(cfg.symbol("A"), UsageError);
}

TEST_CASE("set checks the schema type") {
    auto cfg = RunConfig::defaults("fit");
    CHECK_THROWS_AS(cfg.set("lambda.mu_min", "large"), UsageError);
    CHECK_THROWS_AS(cfg.set("lambda.nonsense", 1.0), UsageError);
    cfg.set("depth", 7);
    CHECK(cfg.integer("depth") == 7);
}

TEST_CASE("tolerance override targets the command's comparison") {
    auto t14 = RunConfig::defaults("verify-t14");
    apply_tolerance(t14, 1e-3);
    CHECK(t14.number("tolerances.pointwise") == 1e-3);
    CHECK(t14.number("tolerances.integrated") == 1e-3);

    auto fit = RunConfig::defaults("fit");
    const double oracle_tol = fit.number("tolerances.oracle");
    apply_tolerance(fit, 0.5);
    CHECK(fit.number("tolerances.fit") == 0.5);
    CHECK(fit.number("tolerances.oracle") == oracle_tol);

    CHECK_THROWS_AS(apply_tolerance(fit, 0.0), ConfigError);
    auto all = RunConfig::defaults("verify-all");
    CHECK_THROWS_AS(apply_tolerance(all, 1e-3), ConfigError);
}

TEST_CASE("report document carries the identity fields and the config") {
    const auto cfg = RunConfig::defaults("verify-t14");
    const auto result = run_command(cfg);
    CHECK(result.pass());
    const auto doc = report_document(cfg, result);
    for (const char* key : {"identity", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass", "breakdown", "config"})
        CHECK_MESSAGE(doc.contains(key), key);
    CHECK(doc["schema"] == kReportSchema);
    CHECK(doc["command"] == "verify-t14");
    CHECK(doc["pass"] == true);
    CHECK(doc["lhs"].is_array());
}

TEST_CASE("embedded config reruns to the same report") {
    auto cfg = RunConfig::defaults("fit");
    cfg.set("lambda.samples", 12);
    const auto first = report_document(cfg, run_command(cfg));
    const auto again_cfg = RunConfig::parse("fit", first["config"].dump());
    CHECK(again_cfg.tree() == cfg.tree());
    const auto second = report_document(again_cfg, run_command(again_cfg));
    CHECK(first.dump() == second.dump());
}

TEST_CASE("tolerance failure is reported, not thrown") {
    auto cfg = RunConfig::defaults("fit");
    cfg.set("tolerances.fit", 1e-12);
    CHECK_FALSE(run_command(cfg).pass());
}

TEST_CASE("atomic write replaces the target") {
    const auto dir = std::filesystem::temp_directory_path() / "qtrace_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "out.json").string();
    write_atomically(path, "first\n");
    write_atomically(path, "second\n");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "second\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
}
