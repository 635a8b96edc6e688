#pragma once

#include "qtrace/parametrix/differential_operator.hpp"
#include "qtrace/parametrix/symbol.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qtrace::cli {

/// Every command the front end knows, in help order.
const std::vector<std::string>& command_names();

/// Resolved run configuration: the command preset overlaid with the user's file and
/// flag overrides. Keys are addressed by dotted paths such as "lambda.mu_min".
class RunConfig {
public:
    /// Schema defaults plus the preset of `command`. Unknown commands raise UsageError.
    static RunConfig defaults(const std::string& command);
    /// Preset overlaid with YAML text. Malformed text, unknown keys, wrong value types
    /// and unparsable symbols raise ConfigError with the 1-based line and column.
    static RunConfig parse(const std::string& command, const std::string& text);
    static RunConfig load(const std::string& command, const std::string& path);

    const std::string& command() const { return command_; }
    const nlohmann::json& tree() const { return tree_; }

    double number(std::string_view path) const;
    int integer(std::string_view path) const;
    std::string text(std::string_view path) const;
    std::vector<double> numbers(std::string_view path) const;
    /// Replaces a leaf; the value must have the leaf's schema type.
    void set(std::string_view path, const nlohmann::json& value);

    /// True when operators.<name>.symbol is non-empty.
    bool has_operator(const std::string& name) const;
    /// operators.<name> as a differential operator on the configured torus dimension.
    param::DifferentialOperator differential_operator(const std::string& name) const;
    /// operators.<name> as a one-term classical symbol; the order is read from the
    /// config or, when blank, measured from the symbol's homogeneity.
    param::PolyhomSymbol symbol(const std::string& name) const;
    /// operators.<name> as a plain expression, powers applied.
    sym::Expression expression(const std::string& name) const;

    /// Position of a key in the source text, {0, 0} for preset values.
    std::pair<int, int> mark(std::string_view path) const;

private:
    std::string command_;
    nlohmann::json tree_;
    std::map<std::string, std::pair<int, int>, std::less<>> marks_;

    const nlohmann::json& at(std::string_view path) const;
    void validate() const;
};

}  // namespace qtrace::cli
