#include "qtrace/cli/commands.hpp"

#include "qtrace/boundary/verify.hpp"
#include "qtrace/errors.hpp"
#include "qtrace/logresidue/verify.hpp"
#include "qtrace/oracle/resolvent.hpp"
#include "qtrace/oracle/spectrum.hpp"
#include "qtrace/symexpr/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qtrace::cli {

namespace {

using nlohmann::json;
using sym::Var;

[[noreturn]] void config_fail(const RunConfig& cfg, const std::string& path, const std::string& what) {
    const auto [line, col] = cfg.mark(path);
    throw ConfigError(what, line, col);
}

std::string term_label(int j, const sym::Rational& degree) {
    return "term " + std::to_string(j) + " (degree " + sym::to_string(degree) + ")";
}

/// Probe point away from ξ = 0 used by the per-term cross-checks.
sym::Point probe_point(int dim) {
    sym::Point p;
    p.set(Var::X1, 0.7).set(Var::X2, 1.9);
    if (dim == 1) {
        p.set(Var::Xi1, 1.5).set(Var::Xi2, 0.0);
    } else {
        p.set(Var::Xi1, 1.5 * std::cos(0.4)).set(Var::Xi2, 1.5 * std::sin(0.4));
    }
    return p;
}

logres::VerifyOptions verify_options(const RunConfig& cfg) {
    logres::VerifyOptions o;
    o.grid = cfg.integer("quadrature.grid");
    o.integration_grid = cfg.integer("quadrature.integration_grid");
    o.sphere_degree = cfg.integer("quadrature.sphere_degree");
    o.extra_depth = cfg.integer("depth");
    o.tol_pointwise = cfg.number("tolerances.pointwise");
    o.tol_integrated = cfg.number("tolerances.integrated");
    o.ray_angles = cfg.numbers("lambda.rays");
    return o;
}

std::string density_csv(const IdentityReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "x1,x2,lhs_re,lhs_im,rhs_re,rhs_im\n";
    for (const auto& row : r.breakdown.at("density")) {
        const auto& x = row.at("x");
        os << x.at(0).get<double>() << ',' << (x.size() > 1 ? x.at(1).get<double>() : 0.0) << ','
           << row.at("lhs").at(0).get<double>() << ',' << row.at("lhs").at(1).get<double>() << ','
           << row.at("rhs").at(0).get<double>() << ',' << row.at("rhs").at(1).get<double>() << '\n';
    }
    return os.str();
}

json fit_json(const oracle::ExpansionFit& f) {
    json coeffs = json::array();
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        coeffs.push_back({{"exponent", f.basis.exponents[i]}, {"value", complex_json(f.coeffs[i])}});
    json logs = json::array();
    for (std::size_t i = 0; i < f.log_coeffs.size(); ++i)
        logs.push_back({{"exponent", f.basis.log_exponents[i]}, {"value", complex_json(f.log_coeffs[i])}});
    return {{"basis", f.basis.describe()},  {"coefficients", coeffs},       {"log_coefficients", logs},
            {"target_exponent", f.target_exponent}, {"residual", f.residual}, {"condition", f.condition},
            {"stability", f.stability},     {"ray_angle", f.ray_angle},     {"z_min", f.z_min},
            {"z_max", f.z_max},             {"samples", f.samples}};
}

CommandResult expand_resolvent(const RunConfig& cfg) {
    const auto p = cfg.differential_operator("P");
    const int depth = cfg.integer("depth");
    const double tol = cfg.number("tolerances.homogeneity");
    const auto q = param::resolvent_expansion(p, depth);
    IdentityReport r;
    r.identity = "resolvent parametrix terms are quasi-homogeneous";
    json terms = json::array();
    for (int j = 0; j <= q.depth(); ++j) {
        const auto& t = q.terms()[j];
        json certs = json::array();
        for (const auto& c : t.certificates()) certs.push_back({{"nu", c.nu}, {"r", sym::to_string(c.r)}});
        terms.push_back({{"j", j},
                         {"degree", sym::to_string(t.degree())},
                         {"zero", t.is_zero()},
                         {"pieces", t.pieces().size()},
                         {"certificates", certs},
                         {"prefix", t.to_prefix()}});
        if (t.is_zero()) continue;
        const auto h = sym::homogeneity_check(t.to_expression(), t.degree(), p.dim(), p.order(), 24, tol);
        r.add(make_check(term_label(j, t.degree()) + " scaling deviation", h.max_rel_deviation, 0.0, tol));
    }
    if (r.checks.empty()) r.add(make_check("all terms vanish", 0.0, 0.0, tol));
    const auto pc = param::parametrix_identity_check(p, q);
    r.breakdown["operator"] = sym::to_prefix(p.full_symbol());
    r.breakdown["order"] = p.order();
    r.breakdown["dim"] = p.dim();
    r.breakdown["depth"] = depth;
    r.breakdown["terms"] = terms;
    r.breakdown["composition_residual"] = {
        {"max_abs", pc.max_abs}, {"scaled_constant", pc.fitted_constant}, {"samples", pc.samples}};
    json warnings = json::array();
    for (const auto& w : q.warnings()) warnings.push_back(w);
    r.breakdown["warnings"] = warnings;
    return {{r}, {}, ""};
}

CommandResult log_symbol_cmd(const RunConfig& cfg) {
    const auto p = cfg.differential_operator("P");
    const int depth = cfg.integer("depth");
    const double tol = cfg.number("tolerances.contour");
    const auto ls = logres::log_symbol(p, depth);
    const auto q = param::resolvent_expansion(p, depth);
    const sym::Point at = probe_point(p.dim());
    IdentityReport r;
    r.identity = "log symbol terms equal the keyhole contour transform";
    json terms = json::array();
    for (int j = 0; j <= depth; ++j) {
        const auto b = ls.b.term(j);
        terms.push_back({{"j", j}, {"degree", sym::to_string(ls.b.order() - j)}, {"prefix", sym::to_prefix(b)}});
        if (j == 0) continue;
        const auto& t = q.terms()[j];
        const complex closed = sym::evaluate(b, at);
        if (t.is_zero()) {
            r.add(make_check(term_label(j, ls.b.order() - j) + " vanishes with its resolvent term", closed, 0.0, 0.0));
            continue;
        }
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& base : t.bases()) {
            const double v = std::abs(sym::evaluate(base, at));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        logres::KeyholeContour contour;
        contour.inner_radius = std::min(0.25, 0.25 * lo);
        contour.outer_radius = std::max(100.0, 4.0 * hi);
        const auto k = logres::contour_check(t.to_expression(), contour, at, tol);
        r.add(make_check(term_label(j, ls.b.order() - j) + " closed form vs contour", closed, -k.contour_value, tol));
    }
    if (r.checks.empty()) r.add(make_check("no lower-order terms requested", 0.0, 0.0, tol));
    r.breakdown["operator"] = sym::to_prefix(p.full_symbol());
    r.breakdown["m"] = ls.m;
    r.breakdown["depth"] = depth;
    r.breakdown["probe"] = {{"x1", at.get(Var::X1).real()}, {"x2", at.get(Var::X2).real()},
                            {"xi1", at.get(Var::Xi1).real()}, {"xi2", at.get(Var::Xi2).real()}};
    r.breakdown["terms"] = terms;
    return {{r}, {}, ""};
}

CommandResult residue_cmd(const RunConfig& cfg) {
    const int dim = cfg.integer("geometry.dim");
    const bool of_a = cfg.has_operator("A");
    param::PolyhomSymbol s;
    int m = 0;
    if (of_a) {
        s = cfg.symbol("A");
    } else {
        const auto p = cfg.differential_operator("P");
        m = p.order();
        s = logres::log_symbol(p, cfg.integer("depth")).b;
    }
    const int grid = cfg.integer("quadrature.integration_grid");
    const int deg = cfg.integer("quadrature.sphere_degree");
    logres::Domain dom{dim, {2 * M_PI, 2 * M_PI}, {grid, grid}};
    logres::Domain fine{dim, {2 * M_PI, 2 * M_PI}, {2 * grid, 2 * grid}};
    const auto v = logres::noncommutative_residue(s, dom, deg);
    const auto w = logres::noncommutative_residue(s, fine, 2 * deg);
    IdentityReport r;
    r.identity = of_a ? "noncommutative residue of A" : "noncommutative residue of log P";
    r.add(make_check("residue vs doubled quadrature", v.value, w.value, cfg.number("tolerances.residue")));
    r.breakdown["symbol"] = of_a ? "A" : "log P";
    r.breakdown["term_present"] = v.term_present;
    r.breakdown["degree"] = sym::to_string(v.degree);
    r.breakdown["sphere_nodes"] = v.sphere_nodes;
    r.breakdown["normalization"] = {{"norm_dim", v.norm_dim}, {"factor", v.normalization}};
    r.breakdown["x_volume"] = v.x_volume;
    if (!of_a) r.breakdown["minus_residue_over_m"] = complex_json(-v.value / static_cast<double>(m));
    return {{r}, {}, ""};
}

CommandResult verify_symbolic(const RunConfig& cfg) {
    const auto opt = verify_options(cfg);
    IdentityReport r;
    const auto& cmd = cfg.command();
    if (cmd == "verify-t14") {
        r = logres::verify_t14(cfg.differential_operator("P"), opt);
    } else if (cmd == "verify-t22") {
        r = logres::verify_t22(cfg.symbol("A"), cfg.differential_operator("P1"), cfg.differential_operator("P2"), opt);
    } else {
        r = logres::verify_t23(cfg.symbol("A"), cfg.symbol("A_prime"), cfg.differential_operator("P"), opt);
    }
    return {{r}, {}, density_csv(r)};
}

bdry::T310Options t310_options(const RunConfig& cfg) {
    bdry::T310Options o;
    o.length = cfg.number("geometry.length");
    o.mass1 = cfg.number("model.mass1");
    o.mass2 = cfg.number("model.mass2");
    o.a = cfg.text("model.a");
    o.power = cfg.integer("model.power");
    o.lattice_cutoff = cfg.integer("model.lattice_cutoff");
    o.mu_min = cfg.number("lambda.mu_min");
    o.mu_max = cfg.number("lambda.mu_max");
    o.samples = cfg.integer("lambda.samples");
    o.ray_angle = cfg.number("lambda.ray_angle");
    o.fit_terms = cfg.integer("model.fit_terms");
    o.tol_fit = cfg.number("tolerances.fit");
    o.tol_residue = cfg.number("tolerances.residue");
    o.tol_sgo = cfg.number("tolerances.sgo");
    o.tol_power = cfg.number("tolerances.power");
    o.rho_min = cfg.number("model.rho_min");
    o.rho_max = cfg.number("model.rho_max");
    o.gauss_nodes = cfg.integer("quadrature.gauss_nodes");
    return o;
}

CommandResult verify_t310(const RunConfig& cfg) {
    const auto opt = t310_options(cfg);
    CommandResult out{{bdry::verify_t310_model(opt)}, {}, ""};
    if (!cfg.text("output.csv").empty()) {
        std::vector<complex> z, v;
        const auto f = bdry::t310_lattice_fit(opt, &z, &v);
        out.csv = oracle::fit_csv(z, v, f);
    }
    return out;
}

CommandResult verify_ex53(const RunConfig& cfg) {
    if (cfg.text("geometry.kind") != "cylinder")
        config_fail(cfg, "geometry.kind", "verify-ex53 needs geometry.kind: cylinder");
    bdry::Ex53Options o;
    o.cylinder = {cfg.number("geometry.circumference"), cfg.number("geometry.length"), cfg.number("geometry.mass2")};
    o.dim = cfg.integer("geometry.dim");
    o.expansion_depth = cfg.integer("depth");
    o.tol = cfg.number("tolerances.oracle");
    return {{bdry::verify_ex53(o)}, {}, ""};
}

void check_expected(const RunConfig& cfg, IdentityReport& r, const std::string& name, complex value, double tol) {
    const auto e = cfg.numbers("expected");
    if (e.empty()) return;
    if (e.size() > 2) config_fail(cfg, "expected", "expected must be [re] or [re, im]");
    r.add(make_check(name, value, complex(e[0], e.size() == 2 ? e[1] : 0.0), tol));
}

CommandResult fit_cmd(const RunConfig& cfg) {
    oracle::TraceProblem tp;
    tp.kind = cfg.text("oracle.trace");
    tp.dim = cfg.integer("geometry.dim");
    tp.a = cfg.has_operator("A") ? cfg.expression("A") : sym::Expression(1);
    if (tp.kind == "difference") {
        tp.p = cfg.expression("P1");
        tp.p2 = cfg.expression("P2");
    } else {
        tp.p = cfg.expression("P");
        if (tp.kind == "commutator") tp.a_prime = cfg.expression("A_prime");
    }
    oracle::FitBasis basis;
    basis.exponents = cfg.numbers("oracle.exponents");
    basis.log_exponents = cfg.numbers("oracle.log_exponents");
    if (basis.exponents.empty()) config_fail(cfg, "oracle.exponents", "oracle.exponents must list the fit exponents");
    oracle::FitOptions fo;
    fo.max_condition = cfg.number("oracle.max_condition");
    fo.target_exponent = cfg.number("oracle.target_exponent");
    fo.weight_exponent = cfg.number("oracle.weight_exponent");

    const int K = cfg.integer("oracle.cutoff");
    const auto m = tp.assemble(K);
    std::vector<complex> z, v;
    const auto mu = oracle::geometric_grid(cfg.number("lambda.mu_min"), cfg.number("lambda.mu_max"),
                                           cfg.integer("lambda.samples"));
    oracle::sample_ray([&](complex l) { return tp.evaluate(m, l); }, cfg.number("lambda.ray_angle"), mu, z, v);
    const auto f = oracle::fit_expansion(z, v, basis, fo);

    IdentityReport r;
    r.identity = "fitted coefficient of the truncated " + tp.kind + " trace";
    check_expected(cfg, r, "fitted coefficient vs expected", f.target(), cfg.number("tolerances.fit"));
    r.add(make_check("fit stability", f.stability, 0.0, cfg.number("tolerances.stability")));
    if (r.checks.size() == 1) {
        r.lhs = f.target();
        r.rhs = f.target();
        r.abs_err = r.rel_err = 0.0;
    }
    r.breakdown["fit"] = fit_json(f);
    r.breakdown["cutoff"] = K;
    r.breakdown["matrix_dim"] = m.p.dim;
    return {{r}, {}, oracle::fit_csv(z, v, f)};
}

CommandResult zeta0_cmd(const RunConfig& cfg) {
    const std::string kind = cfg.text("oracle.spectrum");
    const int dim = cfg.integer("geometry.dim");
    const int cutoff = cfg.integer("oracle.spectral_cutoff");
    oracle::SpectrumSpec spec;
    if (kind == "torus") {
        spec = oracle::SpectrumSpec::torus_laplacian(dim, cfg.number("geometry.mass2"), cutoff);
    } else if (kind == "cylinder") {
        spec = oracle::dirichlet_product_spectrum(
            {cfg.number("geometry.circumference"), cfg.number("geometry.length"), cfg.number("geometry.mass2")}, cutoff);
    } else {
        const auto p = cfg.differential_operator("P");
        spec = oracle::SpectrumSpec::from_matrix(oracle::build_matrix(p.full_symbol(), dim, cfg.integer("oracle.cutoff")),
                                                 p.order());
    }
    oracle::HeatFitOptions h;
    h.t_min = cfg.number("oracle.heat.t_min");
    h.t_max = cfg.number("oracle.heat.t_max");
    h.points = cfg.integer("oracle.heat.points");
    h.terms = cfg.integer("oracle.heat.terms");
    h.drift_tol = cfg.number("oracle.heat.drift_tol");
    const auto z = oracle::zeta_at_zero(spec, h);

    IdentityReport r;
    r.identity = "heat-trace constant C0 = zeta(0) + nullity";
    check_expected(cfg, r, "C0 vs expected", z.c0, cfg.number("tolerances.oracle"));
    r.add(make_check("t^0 coefficient drift", z.drift, 0.0, h.drift_tol));
    if (r.checks.size() == 1) {
        r.lhs = r.rhs = z.c0;
        r.abs_err = r.rel_err = 0.0;
    }
    r.breakdown["spectrum"] = spec.description;
    r.breakdown["zeta0"] = z.zeta0;
    r.breakdown["nu0"] = z.nu0;
    r.breakdown["c0"] = z.c0;
    r.breakdown["fit"] = fit_json(z.fit);

    std::ostringstream os;
    os.precision(17);
    os << "t,heat_trace,fit\n";
    for (double t : oracle::geometric_grid(h.t_min, h.t_max, h.points))
        os << t << ',' << spec.heat_trace(t) << ',' << oracle::evaluate_fit(z.fit, t).real() << '\n';
    return {{r}, {}, os.str()};
}

CommandResult verify_all() {
    CommandResult out;
    for (const auto& c : acceptance_criteria()) {
        out.criteria.push_back(run_criterion(c));
        for (const auto& r : out.criteria.back().reports) out.reports.push_back(r);
    }
    return out;
}

}  // namespace

bool CommandResult::pass() const {
    if (reports.empty() && criteria.empty()) return false;
    for (const auto& r : reports)
        if (!r.pass) return false;
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

CommandResult run_command(const RunConfig& cfg) {
    const auto& c = cfg.command();
    if (c == "expand-resolvent") return expand_resolvent(cfg);
    if (c == "log-symbol") return log_symbol_cmd(cfg);
    if (c == "residue") return residue_cmd(cfg);
    if (c == "verify-t14" || c == "verify-t22" || c == "verify-t23") return verify_symbolic(cfg);
    if (c == "verify-t310") return verify_t310(cfg);
    if (c == "verify-ex53") return verify_ex53(cfg);
    if (c == "fit") return fit_cmd(cfg);
    if (c == "oracle-zeta0") return zeta0_cmd(cfg);
    if (c == "verify-all") return verify_all();
    throw UsageError("unknown command '" + c + "'");
}

void apply_tolerance(RunConfig& cfg, double tol) {
    const auto& c = cfg.command();
    std::vector<std::string> keys;
    if (c == "expand-resolvent") keys = {"tolerances.homogeneity"};
    else if (c == "log-symbol") keys = {"tolerances.contour"};
    else if (c == "residue") keys = {"tolerances.residue"};
    else if (c == "verify-t14" || c == "verify-t22" || c == "verify-t23") keys = {"tolerances.pointwise", "tolerances.integrated"};
    else if (c == "verify-t310" || c == "fit") keys = {"tolerances.fit"};
    else if (c == "verify-ex53" || c == "oracle-zeta0") keys = {"tolerances.oracle"};
    else throw ConfigError("verify-all runs fixed acceptance tolerances; --tol does not apply", 0, 0);
    if (!(tol > 0.0)) throw ConfigError("--tol must be positive", 0, 0);
    for (const auto& k : keys) cfg.set(k, tol);
}

json report_document(const RunConfig& cfg, const CommandResult& result) {
    json doc;
    doc["schema"] = kReportSchema;
    doc["command"] = cfg.command();
    if (result.criteria.empty() && result.reports.size() == 1) {
        doc.update(to_json(result.reports.front()));
    } else {
        doc["pass"] = result.pass();
        doc["criteria"] = json::array();
        for (const auto& c : result.criteria) doc["criteria"].push_back(to_json(c));
        if (result.criteria.empty()) {
            doc["reports"] = json::array();
            for (const auto& r : result.reports) doc["reports"].push_back(to_json(r));
        }
    }
    doc["config"] = cfg.tree();
    return doc;
}

std::string summary_text(const CommandResult& result) {
    std::ostringstream os;
    if (!result.criteria.empty()) {
        for (const auto& c : result.criteria) os << summary_line(c) << '\n';
        os << (result.pass() ? "all criteria pass" : "some criteria fail") << '\n';
        return os.str();
    }
    char buf[256];
    for (const auto& r : result.reports) {
        os << (r.pass ? "PASS  " : "FAIL  ") << r.identity << '\n';
        for (const auto& c : r.checks) {
            std::snprintf(buf, sizeof buf, "  %s  lhs %s  rhs %s  abs_err %.3e  tol %.1e  ", c.pass ? "ok  " : "FAIL",
                          sym::format_complex(c.lhs).c_str(), sym::format_complex(c.rhs).c_str(), c.abs_err, c.tol);
            os << buf << c.name << '\n';
        }
    }
    return os.str();
}

void write_atomically(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write '" + tmp.string() + "'");
        out << text;
        if (!out.flush()) throw UsageError("cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw UsageError("cannot move report into place at '" + path + "': " + ec.message());
}

}  // namespace qtrace::cli
