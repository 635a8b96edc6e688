#include "qtrace/cli/config.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/symexpr/evaluate.hpp"
#include "qtrace/symexpr/homogeneity.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qtrace::cli {

using nlohmann::json;

namespace {

const json& schema() {
    static const json s = {
        {"geometry",
         {{"kind", "torus"}, {"dim", 1}, {"length", 1.0}, {"circumference", 2 * M_PI}, {"mass2", 1.0}}},
        {"operators",
         {{"P", {{"symbol", ""}, {"power", 1}}},
          {"P1", {{"symbol", ""}, {"power", 1}}},
          {"P2", {{"symbol", ""}, {"power", 1}}},
          {"A", {{"symbol", ""}, {"order", ""}}},
          {"A_prime", {{"symbol", ""}, {"order", ""}}}}},
        {"depth", 0},
        {"quadrature", {{"grid", 8}, {"integration_grid", 32}, {"sphere_degree", 32}, {"gauss_nodes", 24}}},
        {"lambda",
         {{"ray_angle", M_PI}, {"mu_min", 10.0}, {"mu_max", 1e4}, {"samples", 40}, {"rays", json::array()}}},
        {"oracle",
         {{"trace", "resolvent"},
          {"spectrum", "torus"},
          {"cutoff", 64},
          {"spectral_cutoff", 400},
          {"exponents", json::array()},
          {"log_exponents", json::array()},
          {"target_exponent", -1.0},
          {"weight_exponent", 0.0},
          {"max_condition", 1e13},
          {"heat", {{"t_min", 0.005}, {"t_max", 0.15}, {"points", 40}, {"terms", 8}, {"drift_tol", 1e-3}}}}},
        {"model",
         {{"a", "identity"},
          {"power", 1},
          {"mass1", 2.0},
          {"mass2", 1.0},
          {"lattice_cutoff", 64},
          {"fit_terms", 10},
          {"rho_min", 8.0},
          {"rho_max", 64.0}}},
        {"tolerances",
         {{"pointwise", 1e-8},
          {"integrated", 1e-8},
          {"fit", 1e-4},
          {"residue", 1e-10},
          {"sgo", 1e-3},
          {"power", 1e-3},
          {"oracle", 1e-3},
          {"stability", 1e-3},
          {"homogeneity", 1e-10},
          {"contour", 1e-8}}},
        {"expected", json::array()},
        {"output", {{"json", ""}, {"csv", ""}}},
    };
    return s;
}

const std::map<std::string, std::vector<std::string>, std::less<>> kEnums = {
    {"geometry.kind", {"torus", "cylinder"}},
    {"oracle.trace", {"resolvent", "difference", "commutator"}},
    {"oracle.spectrum", {"torus", "cylinder", "matrix"}},
    {"model.a", {"identity", "sgo"}},
};

json preset(const std::string& command) {
    const std::string lap2 = "(add (pow xi1 2) (pow xi2 2) 1)";
    const std::string var1 = "(add (pow xi1 2) 2 (cos 1 x1))";
    if (command == "expand-resolvent") return {{"operators", {{"P", {{"symbol", var1}}}}}, {"depth", 4}};
    if (command == "log-symbol") return {{"operators", {{"P", {{"symbol", var1}}}}}, {"depth", 3}};
    if (command == "residue")
        return {{"geometry", {{"dim", 2}}}, {"operators", {{"P", {{"symbol", lap2}}}}}, {"depth", 2}};
    if (command == "verify-t14") return {{"geometry", {{"dim", 2}}}, {"operators", {{"P", {{"symbol", lap2}}}}}};
    const json pair = {{"A", {{"symbol", "absxi"}, {"order", "1"}}},
                       {"P1", {{"symbol", "(add (pow xi1 2) 3 (cos 1 x1))"}, {"power", 2}}},
                       {"P2", {{"symbol", var1}, {"power", 2}}}};
    if (command == "verify-t22") return {{"operators", pair}};
    if (command == "fit")
        return {{"operators", pair},
                {"lambda", {{"mu_min", 1e2}, {"mu_max", 1e5}, {"samples", 24}}},
                {"oracle",
                 {{"trace", "difference"},
                  {"exponents", {0.0, -1.0, -1.5, -2.0, -2.5, -3.0}},
                  {"log_exponents", {-2.0}}}},
                {"tolerances", {{"fit", 1e-3}}},
                {"expected", {-1.0, 0.0}}};
    if (command == "verify-t23")
        return {{"operators",
                 {{"A", {{"symbol", "(expi 1)"}, {"order", "0"}}},
                  {"A_prime", {{"symbol", "absxi"}, {"order", "1"}}},
                  {"P", {{"symbol", var1}, {"power", 2}}}}}};
    if (command == "verify-t310") return json::object();
    if (command == "verify-ex53")
        return {{"geometry", {{"kind", "cylinder"}, {"dim", 2}, {"length", M_PI}, {"mass2", 1.0}}}, {"depth", 6}};
    if (command == "oracle-zeta0")
        return {{"geometry", {{"dim", 2}, {"mass2", 1.0}}}, {"expected", {-M_PI, 0.0}}, {"tolerances", {{"oracle", 1e-4}}}};
    if (command == "verify-all") return json::object();
    throw UsageError("unknown command '" + command + "'");
}

std::string pointer(std::string_view path) {
    std::string p = "/";
    for (char c : path) p += c == '.' ? '/' : c;
    return p;
}

std::string type_name(const json& leaf) {
    if (leaf.is_number_integer()) return "an integer";
    if (leaf.is_number()) return "a number";
    if (leaf.is_string()) return "a string";
    if (leaf.is_array()) return "a list of numbers";
    return "a mapping";
}

/// Overlays `node` onto `target`, whose shape is the schema.
class Overlay {
public:
    explicit Overlay(std::map<std::string, std::pair<int, int>, std::less<>>& marks) : marks_(marks) {}

    void apply(const YAML::Node& node, json& target, const std::string& path) {
        const auto m = node.Mark();
        marks_[path] = {m.line + 1, m.column + 1};
        if (target.is_object()) {
            if (node.IsScalar() && target.contains("symbol")) {
                marks_[path + ".symbol"] = {m.line + 1, m.column + 1};
                target["symbol"] = node.as<std::string>();
                return;
            }
            if (node.IsNull()) return;
            if (!node.IsMap()) fail(node, (path.empty() ? "document" : path) + " must be a mapping");
            for (const auto& kv : node) {
                const auto key = kv.first.as<std::string>();
                const std::string sub = path.empty() ? key : path + "." + key;
                if (!target.contains(key)) fail(kv.first, "unknown key '" + sub + "'");
                apply(kv.second, target[key], sub);
            }
            return;
        }
        if (target.is_array()) {
            if (node.IsNull()) {
                target = json::array();
                return;
            }
            if (!node.IsSequence()) fail(node, path + " must be a list of numbers");
            json out = json::array();
            for (const auto& e : node) out.push_back(real(e, path, "a list of numbers"));
            target = out;
            return;
        }
        if (!node.IsScalar()) fail(node, path + " must be " + type_name(target));
        if (target.is_number_integer()) {
            const double v = real(node, path, "an integer");
            if (v != std::floor(v) || std::abs(v) > 1e9) fail(node, path + " must be an integer");
            target = static_cast<long long>(v);
        } else if (target.is_number()) {
            target = real(node, path, "a number");
        } else {
            target = node.as<std::string>();
        }
    }

    [[noreturn]] static void fail(const YAML::Node& node, const std::string& what) {
        const auto m = node.Mark();
        throw ConfigError(what, m.line + 1, m.column + 1);
    }

private:
    static double real(const YAML::Node& node, const std::string& path, const std::string& kind) {
        if (!node.IsScalar()) fail(node, path + " must be " + kind);
        try {
            const double v = node.as<double>();
            if (!std::isfinite(v)) fail(node, path + " must be finite");
            return v;
        } catch (const YAML::BadConversion&) {
            fail(node, path + " must be " + kind + ", got '" + node.Scalar() + "'");
        }
    }

    std::map<std::string, std::pair<int, int>, std::less<>>& marks_;
};

/// Measured degree of a homogeneous symbol in ξ, rounded to a multiple of 1/12.
sym::Rational measured_degree(const sym::Expression& e, int dim) {
    sym::Point a, b;
    a.set(sym::Var::X1, 0.7).set(sym::Var::X2, 1.9).set(sym::Var::Xi1, 1.3).set(sym::Var::Xi2, dim == 2 ? 0.8 : 0.0);
    b = a;
    b.set(sym::Var::Xi1, 13.0).set(sym::Var::Xi2, dim == 2 ? 8.0 : 0.0);
    const double ra = std::abs(sym::evaluate(e, a));
    const double rb = std::abs(sym::evaluate(e, b));
    if (!(ra > 0.0) || !(rb > 0.0)) return sym::Rational(0);
    return sym::Rational(std::llround(12.0 * std::log10(rb / ra)), 12);
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "expand-resolvent", "log-symbol", "residue", "verify-t14", "verify-t22",   "verify-t23",
        "verify-t310",      "verify-ex53", "fit",     "oracle-zeta0", "verify-all"};
    return names;
}

RunConfig RunConfig::defaults(const std::string& command) {
    RunConfig c;
    c.command_ = command;
    c.tree_ = schema();
    c.tree_.merge_patch(preset(command));
    return c;
}

RunConfig RunConfig::parse(const std::string& command, const std::string& text) {
    RunConfig c = defaults(command);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    Overlay(c.marks_).apply(root, c.tree_, "");
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& command, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'", 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(command, ss.str());
}

const json& RunConfig::at(std::string_view path) const {
    const json::json_pointer ptr(pointer(path));
    if (!tree_.contains(ptr)) throw UsageError("no config key '" + std::string(path) + "'");
    return tree_.at(ptr);
}

double RunConfig::number(std::string_view path) const { return at(path).get<double>(); }
int RunConfig::integer(std::string_view path) const { return at(path).get<int>(); }
std::string RunConfig::text(std::string_view path) const { return at(path).get<std::string>(); }
std::vector<double> RunConfig::numbers(std::string_view path) const { return at(path).get<std::vector<double>>(); }

void RunConfig::set(std::string_view path, const json& value) {
    const json& old = at(path);
    const bool same = (old.is_number() && value.is_number() && (!old.is_number_integer() || value.is_number_integer())) ||
                      (old.is_string() && value.is_string()) || (old.is_array() && value.is_array());
    if (!same) throw UsageError(std::string(path) + " must be " + type_name(old));
    tree_[json::json_pointer(pointer(path))] = value;
    marks_.erase(std::string(path));
    validate();
}

std::pair<int, int> RunConfig::mark(std::string_view path) const {
    const auto it = marks_.find(path);
    return it == marks_.end() ? std::pair<int, int>{0, 0} : it->second;
}

void RunConfig::validate() const {
    auto fail = [&](const std::string& path, const std::string& what) {
        const auto [line, col] = mark(path);
        throw ConfigError(what, line, col);
    };
    for (const auto& [path, allowed] : kEnums) {
        const auto v = text(path);
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail(path, path + " must be one of " + list + ", got '" + v + "'");
        }
    }
    const int dim = integer("geometry.dim");
    if (dim != 1 && dim != 2) fail("geometry.dim", "geometry.dim must be 1 or 2");
    for (const auto& [name, spec] : tree_.at("operators").items()) {
        const std::string path = "operators." + name + ".symbol";
        const auto s = spec.at("symbol").get<std::string>();
        if (s.empty()) continue;
        try {
            (void)sym::parse_prefix(s);
        } catch (const UsageError& e) {
            fail(path, path + ": " + e.what());
        }
        if (spec.contains("power") && spec.at("power").get<int>() < 1)
            fail("operators." + name + ".power", "operators." + name + ".power must be at least 1");
        if (spec.contains("order") && !spec.at("order").get<std::string>().empty()) {
            try {
                (void)sym::parse_rational(spec.at("order").get<std::string>());
            } catch (const UsageError& e) {
                fail("operators." + name + ".order", "operators." + name + ".order: " + e.what());
            }
        }
    }
    if (integer("depth") < 0) fail("depth", "depth must be non-negative");
}

bool RunConfig::has_operator(const std::string& name) const {
    return !text("operators." + name + ".symbol").empty();
}

sym::Expression RunConfig::expression(const std::string& name) const {
    if (!has_operator(name)) throw ConfigError("operators." + name + " is required by " + command_, 0, 0);
    const std::string base = "operators." + name;
    const auto e = sym::parse_prefix(text(base + ".symbol"));
    if (!tree_.at("operators").at(name).contains("power") || integer(base + ".power") == 1) return e;
    return differential_operator(name).full_symbol();
}

param::DifferentialOperator RunConfig::differential_operator(const std::string& name) const {
    if (!has_operator(name)) throw ConfigError("operators." + name + " is required by " + command_, 0, 0);
    const std::string base = "operators." + name;
    const auto p = param::DifferentialOperator::from_symbol(sym::parse_prefix(text(base + ".symbol")),
                                                           integer("geometry.dim"));
    const int power = integer(base + ".power");
    return power == 1 ? p : p.power(power);
}

param::PolyhomSymbol RunConfig::symbol(const std::string& name) const {
    if (!has_operator(name)) throw ConfigError("operators." + name + " is required by " + command_, 0, 0);
    const std::string base = "operators." + name;
    const int dim = integer("geometry.dim");
    const auto e = sym::parse_prefix(text(base + ".symbol"));
    const auto order_text = text(base + ".order");
    const sym::Rational order = order_text.empty() ? measured_degree(e, dim) : sym::parse_rational(order_text);
    const auto h = sym::homogeneity_check(e, order, dim, 0);
    if (!h.pass)
        throw UsageError(base + " is not homogeneous of degree " + sym::to_string(order) + " (worst point " +
                         h.worst_point + ")");
    return param::PolyhomSymbol::from_terms(order, dim, {e});
}

}  // namespace qtrace::cli
