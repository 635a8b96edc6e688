#pragma once

#include "qtrace/cli/acceptance.hpp"
#include "qtrace/cli/config.hpp"
#include "qtrace/report.hpp"

#include <string>
#include <vector>

namespace qtrace::cli {

inline constexpr const char* kReportSchema = "qtrace-report/1";

/// Exit codes of the front end.
enum ExitCode : int { kPass = 0, kToleranceFailure = 1, kConfigError = 2, kPreconditionFailure = 3 };

struct CommandResult {
    std::vector<IdentityReport> reports;
    std::vector<CriterionResult> criteria;  // verify-all only
    std::string csv;                        // fit samples or pointwise densities, empty if none
    bool pass() const;
};

/// Runs one command against a resolved config. Library errors propagate.
CommandResult run_command(const RunConfig& cfg);

/// Applies a --tol override to the tolerance keys the command compares against.
void apply_tolerance(RunConfig& cfg, double tol);

/// Self-contained report: schema tag, command, resolved config, and either the single
/// identity's fields at top level or a list of reports.
nlohmann::json report_document(const RunConfig& cfg, const CommandResult& result);

/// Human-readable summary, one line per identity and one per sub-check.
std::string summary_text(const CommandResult& result);

/// Writes `text` to a sibling temporary file, then renames it over `path`.
void write_atomically(const std::string& path, const std::string& text);

}  // namespace qtrace::cli
