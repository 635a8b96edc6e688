#include "qtrace/cli/acceptance.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

using namespace qtrace::cli;

// Usage: acceptance [--json PATH] [criterion ...]
int main(int argc, char** argv) {
    std::set<int> only;
    std::string json_path;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--json" && i + 1 < argc) {
            json_path = argv[++i];
        } else {
            char* end = nullptr;
            const long id = std::strtol(a.c_str(), &end, 10);
            if (*end != '\0' || id < 1 || id > 10) {
                std::cerr << "usage: acceptance [--json PATH] [criterion 1-10 ...]\n";
                return 2;
            }
            only.insert(static_cast<int>(id));
        }
    }

    bool all = true;
    nlohmann::json doc = {{"criteria", nlohmann::json::array()}};
    for (const auto& c : acceptance_criteria()) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto r = run_criterion(c);
        std::cout << summary_line(r) << std::endl;
        doc["criteria"].push_back(to_json(r));
        all = all && r.pass;
    }
    doc["pass"] = all;
    if (!json_path.empty()) std::ofstream(json_path) << doc.dump(2) << '\n';
    std::cout << (all ? "acceptance: PASS" : "acceptance: FAIL") << std::endl;
    return all ? 0 : 1;
}
