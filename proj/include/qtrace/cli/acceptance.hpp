#pragma once

#include "qtrace/report.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qtrace::cli {

/// One acceptance criterion: its identity reports, wall time and time budget.
struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<IdentityReport> reports;
    double seconds = 0.0;
    double budget = 0.0;
    std::string error;  // set when a precondition failure stopped the run
    bool pass = false;
};

struct Criterion {
    int id = 0;
    std::string title;
    double budget = 0.0;  // seconds
    std::function<std::vector<IdentityReport>()> run;
};

/// The ten acceptance criteria in order.
const std::vector<Criterion>& acceptance_criteria();

/// Runs one criterion, timing it; library errors are recorded, not thrown.
CriterionResult run_criterion(const Criterion& c);

/// `1 PASS 0.8s/60s  title  (lhs …, rhs …)`
std::string summary_line(const CriterionResult& r);

nlohmann::json to_json(const CriterionResult& r);

}  // namespace qtrace::cli
