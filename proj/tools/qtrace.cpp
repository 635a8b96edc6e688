#include "qtrace/cli/commands.hpp"
#include "qtrace/errors.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <optional>

using namespace qtrace;
using namespace qtrace::cli;

namespace {

struct Flags {
    std::string config;
    std::optional<double> tol;
    std::optional<int> depth;
    std::string json_out;
    std::string csv_out;
    std::optional<double> ray_angle;
};

const std::map<std::string, std::string> kHelp = {
    {"expand-resolvent", "Resolvent parametrix terms and their homogeneity"},
    {"log-symbol", "Log symbol terms checked against the contour transform"},
    {"residue", "Noncommutative residue of log P"},
    {"verify-t14", "Constant term of the resolvent trace against res(log P)"},
    {"verify-t22", "Difference of two constant terms against res(A(log P1 - log P2))"},
    {"verify-t23", "Commutator constant term against res(A[A', log P])"},
    {"verify-t310", "Log-difference trace on the cylinder model"},
    {"verify-ex53", "zeta(0) on the Dirichlet cylinder"},
    {"fit", "Fit the large-|lambda| expansion of a truncated trace"},
    {"oracle-zeta0", "Heat-trace constant against zeta(0)"},
    {"verify-all", "Run every acceptance criterion"},
};

int run(const std::string& command, const Flags& f) {
    RunConfig cfg = f.config.empty() ? RunConfig::defaults(command) : RunConfig::load(command, f.config);
    if (f.tol) apply_tolerance(cfg, *f.tol);
    if (f.depth) cfg.set("depth", *f.depth);
    if (f.ray_angle) {
        cfg.set("lambda.ray_angle", *f.ray_angle);
        auto rays = cfg.numbers("lambda.rays");
        rays.push_back(*f.ray_angle);
        cfg.set("lambda.rays", rays);
    }
    if (!f.json_out.empty()) cfg.set("output.json", f.json_out);
    if (!f.csv_out.empty()) cfg.set("output.csv", f.csv_out);

    const auto result = run_command(cfg);
    const std::string json_path = cfg.text("output.json").empty() ? command + ".json" : cfg.text("output.json");
    write_atomically(json_path, report_document(cfg, result).dump(2) + "\n");
    if (!cfg.text("output.csv").empty()) {
        if (result.csv.empty())
            std::cerr << "note: " << command << " has no CSV export\n";
        else
            write_atomically(cfg.text("output.csv"), result.csv);
    }
    std::cout << summary_text(result) << "report: " << json_path << '\n';
    return result.pass() ? kPass : kToleranceFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verify log-polyhomogeneous trace identities on tori and cylinders."};
    app.require_subcommand(1);
    Flags flags;
    std::string chosen;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, kHelp.at(name));
        sub->add_option("--config", flags.config, "YAML run configuration");
        sub->add_option("--tol", flags.tol, "Tolerance for the command's main comparison");
        sub->add_option("--depth", flags.depth, "Expansion depth");
        sub->add_option("--json-out", flags.json_out, "Report path (default <command>.json)");
        sub->add_option("--csv-out", flags.csv_out, "CSV export path");
        sub->add_option("--ray-angle", flags.ray_angle, "Ray angle arg(lambda) in radians");
        sub->callback([&chosen, name] { chosen = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        return run(chosen, flags);
    } catch (const ConfigError& e) {
        std::cerr << "config error";
        if (e.line() > 0) std::cerr << " at line " << e.line() << ", column " << e.column();
        std::cerr << ": " << e.what() << '\n';
        return kConfigError;
    } catch (const SpectralCollision& e) {
        std::cerr << "precondition failed: " << e.what() << " (nearest eigenvalue " << e.nearest_re() << " + "
                  << e.nearest_im() << "i)\n";
        return kPreconditionFailure;
    } catch (const Error& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return kPreconditionFailure;
    }
}
