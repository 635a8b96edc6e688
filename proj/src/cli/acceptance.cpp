#include "qtrace/cli/acceptance.hpp"

#include "qtrace/boundary/verify.hpp"
#include "qtrace/errors.hpp"
#include "qtrace/logresidue/radial.hpp"
#include "qtrace/logresidue/verify.hpp"
#include "qtrace/oracle/resolvent.hpp"
#include "qtrace/oracle/spectrum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace qtrace::cli {

namespace {

using param::DifferentialOperator;
using param::PolyhomSymbol;
using sym::Expression;
using sym::parse_prefix;
using sym::Rational;
using sym::Var;

const std::string kLap2 = "(add (pow xi1 2) (pow xi2 2) 1)";
const std::string kVar1 = "(add (pow xi1 2) 2 (cos 1 x1))";
const std::string kOdd = "(mul (c 0 -0.5) (cos 1 x1) (pow xi1 3))";

DifferentialOperator op(const std::string& s, int dim = 1) { return DifferentialOperator::from_symbol(parse_prefix(s), dim); }

nlohmann::json zeta_json(const oracle::ZetaAtZero& z) {
    return {{"zeta0", z.zeta0}, {"nu0", z.nu0}, {"c0", z.c0}, {"drift", z.drift}};
}

/// Fitted coefficient of (−λ)^{−1} in a truncated trace on the negative ray.
oracle::ExpansionFit trace_fit(const oracle::TraceProblem& tp, int K, double mu_lo, double mu_hi, int count,
                               const oracle::FitBasis& basis) {
    const auto m = tp.assemble(K);
    std::vector<complex> z, v;
    oracle::sample_ray([&](complex l) { return tp.evaluate(m, l); }, M_PI, oracle::geometric_grid(mu_lo, mu_hi, count),
                       z, v);
    return oracle::fit_expansion(z, v, basis);
}

nlohmann::json fit_json(const oracle::ExpansionFit& f, int K) {
    return {{"cutoff", K},           {"basis", f.basis.describe()}, {"target", complex_json(f.target())},
            {"residual", f.residual}, {"condition", f.condition},    {"stability", f.stability},
            {"z_min", f.z_min},       {"z_max", f.z_max},            {"samples", f.samples}};
}

Expression squared(const std::string& s) { return op(s).power(2).full_symbol(); }

std::vector<IdentityReport> criterion1() {
    auto r = logres::verify_t14(op(kLap2, 2));
    r.add(make_check("symbolic value vs -pi", r.lhs, -M_PI, 1e-8));
    const auto z = oracle::zeta_at_zero(oracle::SpectrumSpec::torus_laplacian(2, 1.0));
    r.add(make_check("heat oracle vs symbolic", z.zeta0 + z.nu0, r.lhs, 1e-4));
    r.breakdown["oracle"] = zeta_json(z);
    return {r};
}

std::vector<IdentityReport> criterion2() {
    auto r = logres::verify_t14(op("(pow xi1 2)"));
    r.add(make_check("symbolic C0 is exactly 0", r.lhs, 0.0, 0.0));
    r.add(make_check("residue route is exactly 0", r.rhs, 0.0, 0.0));
    const auto z = oracle::zeta_at_zero(oracle::SpectrumSpec::torus_laplacian(1, 0.0));
    r.add(make_check("heat oracle zeta(0) vs 2 zeta_R(0)", z.zeta0, 2 * std::riemann_zeta(0.0), 1e-6));
    r.add(make_check("heat oracle C0 vs 0", z.zeta0 + z.nu0, 0.0, 1e-6));
    r.breakdown["oracle"] = zeta_json(z);
    return {r};
}

std::vector<IdentityReport> criterion3() {
    auto r = logres::verify_t14(op(kVar1));
    r.add(make_check("symbolic C0 vanishes", r.lhs, 0.0, 1e-12));
    r.add(make_check("residue route vanishes", r.rhs, 0.0, 1e-12));
    const auto m = oracle::build_matrix(parse_prefix(kVar1), 1, 128);
    const auto z = oracle::zeta_at_zero(oracle::SpectrumSpec::from_matrix(m, 2));
    r.add(make_check("heat oracle C0 at K = 128", z.zeta0 + z.nu0, 0.0, 1e-3));
    r.breakdown["oracle"] = zeta_json(z);
    return {r};
}

std::vector<IdentityReport> criterion4() {
    const auto a = PolyhomSymbol::from_terms(Rational(1), 1, {sym::abs_xi()});
    logres::VerifyOptions opt;
    opt.tol_pointwise = 1e-6;
    opt.tol_integrated = 1e-6;
    auto r = logres::verify_t22(a, op("(add (pow xi1 2) 3 (cos 1 x1))").power(2), op(kVar1).power(2), opt);
    r.add(make_check("residue route vs -1", r.rhs, -1.0, 1e-6));
    oracle::TraceProblem tp;
    tp.kind = "difference";
    tp.a = sym::abs_xi();
    tp.p = squared("(add (pow xi1 2) 3 (cos 1 x1))");
    tp.p2 = squared(kVar1);
    oracle::FitBasis b;
    b.exponents = {0, -1, -1.5, -2, -2.5, -3};
    b.log_exponents = {-2};
    const auto f = trace_fit(tp, 128, 1e2, 1e6, 24, b);
    r.add(make_check("matrix oracle fit vs -1", f.target(), -1.0, 1e-3));
    r.breakdown["oracle"] = fit_json(f, 128);
    return {r};
}

std::vector<IdentityReport> criterion5() {
    const auto e = PolyhomSymbol::from_terms(Rational(0), 1, {sym::expi(1)});
    const auto ap = PolyhomSymbol::from_terms(Rational(1), 1, {sym::abs_xi()});
    oracle::TraceProblem tp;
    tp.kind = "commutator";
    tp.a = sym::expi(1);
    tp.a_prime = sym::abs_xi();
    oracle::FitBasis b;
    // The log member is omitted: its coefficient is the residue of [A, A'], which vanishes.
    b.exponents = {0, -0.5, -1, -1.5, -2, -2.5, -3, -3.5};

    const auto p = op(kVar1).power(2);
    auto r = logres::verify_t23(e, ap, p);
    tp.p = p.full_symbol();
    const auto f = trace_fit(tp, 128, 1e2, 1e6, 32, b);
    r.add(make_check("matrix oracle fit vs symbolic", f.target(), r.lhs, 1e-3, true, 1e-2));
    r.breakdown["oracle"] = fit_json(f, 128);

    const auto podd = p + op(kOdd);
    auto v = logres::verify_t23(e, ap, podd);
    v.identity += " (odd third-order perturbation)";
    tp.p = podd.full_symbol();
    const auto fv = trace_fit(tp, 128, 1e2, 1e6, 32, b);
    v.add(make_check("matrix oracle fit vs symbolic", fv.target(), v.lhs, 1e-3, true, 1e-2));
    v.breakdown["oracle"] = fit_json(fv, 128);

    const auto d = PolyhomSymbol::from_terms(Rational(1), 1, {Expression::variable(Var::Xi1)});
    auto c = logres::verify_t23(e, d, op("(add (pow xi1 4) 1)"));
    c.identity += " (commuting control)";
    c.add(make_check("commuting control is exactly 0", c.lhs, 0.0, 0.0));
    c.add(make_check("commuting control residue is exactly 0", c.rhs, 0.0, 0.0));
    return {r, v, c};
}

std::vector<IdentityReport> criterion6() {
    const Expression lam = Expression::variable(Var::Lambda);
    const Expression one(1);
    struct Case {
        Expression f;
        complex value;
    };
    const std::vector<Case> family = {
        {pow(one - lam, -2), 1.0},
        {pow(one - lam, -1) * pow(Expression(2) - lam, -1), std::log(2.0)},
        {pow(one - lam, -3), 0.5},
        {pow(Expression(3) - lam, -2), 1.0 / 3.0},
        {pow(one - lam, -1) * pow(Expression(4) - lam, -1), std::log(4.0) / 3.0},
        {pow(Expression(complex(1.0, 1.0)) - lam, -2), 1.0 / complex(1.0, 1.0)},
        {pow(Expression(complex(2.0, -3.0)) - lam, -1) * pow(Expression(complex(2.0, 3.0)) - lam, -1), std::atan(1.5) / 3.0},
    };
    IdentityReport r;
    r.identity = "keyhole contour equals the real-line integral";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : family) {
        const auto k = logres::contour_check(c.f, logres::KeyholeContour{});
        const std::string tag = sym::to_prefix(c.f);
        r.add(make_check("contour vs real line: " + tag, k.contour_value, k.line_value, 1e-8));
        r.add(make_check("closed form: " + tag, k.line_value, c.value, 1e-8));
        rows.push_back({{"f", tag}, {"contour", complex_json(k.contour_value)}, {"line", complex_json(k.line_value)}});
    }
    r.breakdown["family"] = rows;
    return {r};
}

std::vector<IdentityReport> criterion7() {
    const Expression xi = Expression::variable(Var::Xi1);
    const Expression xi2 = Expression::variable(Var::Xi2);
    const Expression lam = Expression::variable(Var::Lambda);
    IdentityReport anchors;
    anchors.identity = "radial reduction closed-form anchors";
    const auto r1 = logres::radial_reduce(rpow(pow(xi, 2) - lam, Rational(-3, 2)), 1, 2);
    anchors.add(make_check("n = 1 covariable side vs 1/pi", r1.lhs, 1 / M_PI, 1e-8));
    anchors.add(make_check("n = 1 spectral side vs 1/pi", r1.rhs, 1 / M_PI, 1e-8));
    const auto r2 = logres::radial_reduce(pow(pow(xi, 2) + pow(xi2, 2) - lam, -2), 2, 2);
    anchors.add(make_check("n = 2 covariable side vs 1/(4 pi)", r2.lhs, 1 / (4 * M_PI), 1e-8));
    anchors.add(make_check("n = 2 spectral side vs 1/(4 pi)", r2.rhs, 1 / (4 * M_PI), 1e-8));

    IdentityReport prop;
    prop.identity = "radial reduction on parametrix terms";
    struct Family {
        std::string label;
        param::ParamSymbol s;
        int m;
    };
    const auto abs1 = PolyhomSymbol::from_terms(Rational(1), 1, {sym::abs_xi()});
    const auto var = op(kVar1);
    const auto drift = op("(add (pow xi1 2) (mul (sin 1 x1) xi1) 3)");
    const auto p1 = op("(add (pow xi1 2) 3 (cos 1 x1))").power(2);
    const auto p2 = var.power(2);
    const auto t2a = op("(add (pow xi1 2) (pow xi2 2) 2 (cos 1 x1) (sin 1 x2))", 2);
    const auto t2b = op("(add (mul (add 2 (cos 1 x1)) (pow xi1 2)) (pow xi2 2) (mul (cos 1 x2) xi1) 1)", 2);
    std::vector<Family> families;
    for (const auto& p : {var, drift, op("(add (pow xi1 2) (mul (c 0 1) (cos 1 x1) xi1) 2 (sin 2 x1))"),
                          op("(add (mul (add 2 (cos 1 x1)) (pow xi1 2)) 1)"), op(kLap2, 2), t2a, t2b})
        families.push_back({"Q of " + sym::to_prefix(p.full_symbol()), param::resolvent_expansion(p, p.dim()), p.order()});
    for (const auto& p : {var, drift, op("(add (mul (add 2 (cos 1 x1)) (pow xi1 2)) 1)")})
        families.push_back({"|D| Q of " + sym::to_prefix(p.full_symbol()),
                            param::compose_param(abs1, param::resolvent_expansion(p, 2), 2), 2});
    families.push_back({"Q1 - Q2 for squared potentials", param::resolvent_difference(p1, p2, 1), 4});
    families.push_back({"|D| (Q1 - Q2) for squared potentials",
                        param::compose_param(abs1, param::resolvent_difference(p1, p2, 2), 2), 4});
    families.push_back({"Q1 - Q2 on T2", param::resolvent_difference(t2a, op(kLap2, 2), 2), 2});

    const std::vector<std::array<double, 2>> xs = {{0.0, 0.0}, {1.1, 2.3}, {4.0, 0.5}};
    nlohmann::json rows = nlohmann::json::array();
    int tested = 0, nonzero = 0;
    for (const auto& fam : families) {
        const int n = fam.s.dim();
        const Rational target(-fam.m - n);
        const Rational offset = fam.s.order() - target;
        if (!sym::is_integer(offset) || offset < 0 || offset > fam.s.depth())
            throw UsageError("family '" + fam.label + "' has no term of degree " + sym::to_string(target));
        const auto& t = fam.s.terms()[static_cast<std::size_t>(offset.numerator())];
        const bool integrable = param::integrability_report(t, n).integrable;
        rows.push_back({{"family", fam.label}, {"degree", sym::to_string(t.degree())}, {"zero", t.is_zero()},
                        {"integrable", integrable}});
        if (t.is_zero() || !integrable) continue;
        const Expression f = t.to_expression();
        for (const auto& x : xs) {
            const auto rr = logres::radial_reduce(f, n, fam.m, x);
            prop.add(make_check(fam.label + " at x = (" + sym::format_number(x[0]) + ", " + sym::format_number(x[1]) + ")",
                                rr.lhs, rr.rhs, 1e-6, true, 1.0));
            ++tested;
            if (std::abs(rr.lhs) > 1e-12) ++nonzero;
        }
    }
    prop.breakdown["families"] = rows;
    prop.breakdown["comparisons"] = tested;
    prop.breakdown["nonzero_comparisons"] = nonzero;
    return {anchors, prop};
}

std::vector<IdentityReport> criterion8() {
    bdry::T310Options id;
    bdry::T310Options g;
    g.a = "sgo";
    return {bdry::verify_t310_model(id), bdry::verify_t310_model(g)};
}

std::vector<IdentityReport> criterion9() { return {bdry::verify_ex53({})}; }

std::vector<IdentityReport> criterion10() {
    bdry::T310Options o;
    o.power = 2;
    return {bdry::verify_t310_model(o)};
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
    static const std::vector<Criterion> list = {
        {1, "C0 of -Laplacian + 1 on T2: symbolic, residue route and heat oracle equal -pi", 60, criterion1},
        {2, "C0 of -d^2 on T1 vanishes; heat oracle zeta(0) = 2 zeta_R(0)", 10, criterion2},
        {3, "C0 of -d^2 + 2 + cos x vanishes; heat oracle at K = 128", 120, criterion3},
        {4, "log-difference residue for |D| and squared potentials differing by 1 equals -1", 180, criterion4},
        {5, "commutator residue agrees with the matrix oracle; commuting control is 0", 300, criterion5},
        {6, "keyhole contour and real-line integrals of rational functions agree", 5, criterion6},
        {7, "radial reduction anchors and parametrix terms", 30, criterion7},
        {8, "cylinder log-difference trace: fitted coefficient vs boundary residue", 60, criterion8},
        {9, "Dirichlet cylinder C0: heat oracle vs interior and boundary residues", 120, criterion9},
        {10, "iterated resolvent N = 2 coefficient matches N = 1", 60, criterion10},
    };
    return list;
}

CriterionResult run_criterion(const Criterion& c) {
    CriterionResult out;
    out.id = c.id;
    out.title = c.title;
    out.budget = c.budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        out.reports = c.run();
    } catch (const Error& e) {
        out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.pass = out.error.empty() && !out.reports.empty() && out.seconds < out.budget;
    for (const auto& r : out.reports) out.pass = out.pass && r.pass;
    return out;
}

std::string summary_line(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "criterion %2d  %s  %7.2fs / %3.0fs  ", r.id, r.pass ? "PASS" : "FAIL", r.seconds,
                  r.budget);
    std::string line = head + r.title;
    if (!r.error.empty()) return line + "  [error: " + r.error + "]";
    double worst = 0.0;
    for (const auto& rep : r.reports)
        for (const auto& c : rep.checks) {
            if (!c.pass) return line + "  [failed: " + rep.identity + ": " + c.name + "]";
            worst = std::max(worst, c.abs_err);
        }
    char tail[48];
    std::snprintf(tail, sizeof tail, "  [max abs err %.1e]", worst);
    return line + tail;
}

nlohmann::json to_json(const CriterionResult& r) {
    nlohmann::json j = {{"criterion", r.id}, {"title", r.title},   {"pass", r.pass},
                        {"seconds", r.seconds}, {"budget", r.budget}, {"reports", nlohmann::json::array()}};
    if (!r.error.empty()) j["error"] = r.error;
    for (const auto& rep : r.reports) j["reports"].push_back(qtrace::to_json(rep));
    return j;
}

}  // namespace qtrace::cli
