#include "qtrace/boundary/verify.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/logresidue/log_symbol.hpp"
#include "qtrace/numeric/quadrature.hpp"
#include "qtrace/oracle/resolvent.hpp"
#include "qtrace/oracle/spectrum.hpp"
#include "qtrace/symexpr/series.hpp"

#include <cmath>

namespace qtrace::bdry {

namespace {

using sym::Rational;
using sym::Var;

param::DifferentialOperator massive_laplacian(int dim, double mass2) {
    const Expression x1 = Expression::variable(Var::Xi1);
    const Expression x2 = Expression::variable(Var::Xi2);
    const Expression sym = dim == 1 ? x1 * x1 + mass2 : x1 * x1 + x2 * x2 + mass2;
    return param::DifferentialOperator::from_symbol(sym, dim);
}

SGKernel model_g() {
    const Expression rho = sym::abs_xi();
    return SGKernel{{{rho * rho, 0, 0, rho, rho}}};
}

void validate(const T310Options& o) {
    if (!(o.length > 0.0)) throw UsageError("cylinder length must be positive");
    if (!(o.mass1 >= 0.0) || !(o.mass2 >= 0.0)) throw UsageError("masses must be nonnegative");
    if (o.a != "identity" && o.a != "sgo") throw UsageError("model A must be 'identity' or 'sgo'");
    if (o.power < 1 || o.power > 4) throw UsageError("resolvent power must be between 1 and 4");
    if (o.lattice_cutoff < 4) throw UsageError("lattice cutoff must be at least 4");
    if (!(o.mu_min > 0.0) || !(o.mu_max > 2 * o.mu_min)) throw UsageError("lambda range must satisfy 0 < min < max/2");
    if (o.samples < o.fit_terms + 2) throw UsageError("need at least fit_terms + 2 samples");
}

/// S′(ρ) = tr_n(G L_+) with L = log P₁ − log P₂, whose full-line kernel at fixed ξ′
/// is ∫_{√b}^{√a} e^{−u|t|} du; each u-slice is composed and traced in closed form.
std::complex<double> boundary_symbol_value(double rho, const T310Options& o, const std::vector<double>& nodes,
                                           const std::vector<double>& weights) {
    const double ra = std::sqrt(rho * rho + o.mass1);
    const double rb = std::sqrt(rho * rho + o.mass2);
    const double mid = 0.5 * (ra + rb);
    const double half = 0.5 * (ra - rb);
    const SGKernel g = model_g();
    const Point at = Point().set(Var::Xi1, rho);
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double u = mid + half * nodes[i];
        const ToeplitzKernel slice{{{Expression(1), Expression(u)}}};
        s += weights[i] * half * sym::evaluate(normal_trace(sgo_compose(g, slice)), at);
    }
    return s;
}

nlohmann::json fit_json(const oracle::ExpansionFit& f) {
    nlohmann::json c = nlohmann::json::array();
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        c.push_back({{"exponent", f.basis.exponents[i]}, {"value", complex_json(f.coeffs[i])}});
    for (std::size_t i = 0; i < f.log_coeffs.size(); ++i)
        c.push_back({{"log_exponent", f.basis.log_exponents[i]}, {"value", complex_json(f.log_coeffs[i])}});
    return {{"basis", f.basis.describe()}, {"coefficients", c},      {"residual", f.residual},
            {"condition", f.condition},    {"stability", f.stability}, {"range", {f.z_min, f.z_max}},
            {"samples", f.samples},        {"ray_angle", f.ray_angle}};
}

}  // namespace

Expression t310_summand(const T310Options& opt) {
    validate(opt);
    const ToeplitzKernel diff = full_line_resolvent(dirichlet_sigma(opt.mass1)) - full_line_resolvent(dirichlet_sigma(opt.mass2));
    Expression base = opt.a == "identity" ? opt.length * diff.diagonal() : composed_trace(model_g(), diff);
    if (opt.power > 1) base = sym::differentiate(base, Var::Lambda, opt.power - 1) * (1.0 / std::tgamma(opt.power));
    return base;
}

oracle::ExpansionFit t310_lattice_fit(const T310Options& opt, std::vector<std::complex<double>>* z,
                                      std::vector<std::complex<double>>* values) {
    const Expression f = t310_summand(opt);
    const bool skip_zero = opt.a == "sgo";  // G vanishes at ξ′ = 0
    auto trace = [&](std::complex<double> lambda) { return oracle::lattice_sum(f, lambda, opt.lattice_cutoff, skip_zero); };
    oracle::FitBasis basis;
    for (int j = 0; j < opt.fit_terms; ++j) basis.exponents.push_back(-(opt.power - 1) - 0.5 * j);
    oracle::FitOptions fo;
    fo.target_exponent = -opt.power;
    fo.weight_exponent = -opt.power;
    auto fit = oracle::fit_ray(trace, opt.ray_angle, opt.mu_min, opt.mu_max, opt.samples, basis, fo);
    if (z && values) oracle::sample_ray(trace, opt.ray_angle, oracle::geometric_grid(opt.mu_min, opt.mu_max, opt.samples), *z, *values);
    return fit;
}

IdentityReport verify_t310_model(const T310Options& opt) {
    validate(opt);
    IdentityReport rep;
    rep.identity = "log-difference trace on the cylinder model";
    const auto fit = t310_lattice_fit(opt);
    const std::complex<double> lhs = fit.target();
    rep.breakdown["fit"] = fit_json(fit);
    rep.breakdown["model_a"] = opt.a;
    rep.breakdown["power"] = opt.power;
    rep.breakdown["summand"] = sym::to_prefix(t310_summand(opt), 400);

    std::complex<double> rhs;
    if (opt.a == "identity") {
        const auto l = logres::log_difference_symbol(massive_laplacian(2, opt.mass1), massive_laplacian(2, opt.mass2), 2);
        Domain x;
        x.dim = 2;
        x.length = {2 * M_PI, opt.length};
        const auto res = fgls_residue(l, x, std::nullopt, Domain{}, 2);
        rhs = -0.5 * res.value;
        rep.add(make_check("lattice fit vs residue route", lhs, rhs, opt.tol_fit));
        const double closed = -opt.length * (opt.mass1 - opt.mass2) / 2;
        rep.add(make_check("residue route vs closed form", rhs, closed, opt.tol_residue));
        rep.breakdown["interior_residue"] = complex_json(res.interior.value);
        rep.breakdown["boundary_residue"] = 0.0;
        rep.breakdown["interior_symbol_degree_-2"] = sym::to_prefix(l.term_of_degree(Rational(-2)), 400);
        rep.add(make_check("fit stability", fit.stability, 0.0, opt.tol_fit));
    } else {
        std::vector<double> nodes, weights;
        num::gauss_legendre(opt.gauss_nodes, nodes, weights);
        std::vector<std::complex<double>> z, v;
        double worst = 0.0;
        for (double rho : oracle::geometric_grid(opt.rho_min, opt.rho_max, 30)) {
            const auto s = boundary_symbol_value(rho, opt, nodes, weights);
            const double ra = std::sqrt(rho * rho + opt.mass1);
            const double rb = std::sqrt(rho * rho + opt.mass2);
            worst = std::max(worst, std::abs(s - rho * std::log((ra + rho) / (rb + rho))));
            z.emplace_back(rho);
            v.push_back(s);
        }
        oracle::FitBasis basis;
        for (int j = 0; j < 8; ++j) basis.exponents.push_back(1.0 - j);
        oracle::FitOptions fo;
        fo.target_exponent = -1.0;
        fo.weight_exponent = -1.0;
        const auto sfit = oracle::fit_expansion(z, v, basis, fo);
        const auto s_minus1 = sfit.target();
        const auto bsym =
            PolyhomSymbol::from_terms(Rational(-1), 1, {Expression(s_minus1) * sym::pow(sym::abs_xi(), -1)}, false);
        Domain xp;
        xp.dim = 1;
        xp.length = {2 * M_PI, 0.0};
        const auto res = fgls_residue(std::nullopt, Domain{2}, bsym, xp, 2);
        rhs = -0.5 * res.value;
        rep.add(make_check("lattice fit vs residue route", lhs, rhs, opt.tol_sgo, true));
        rep.add(make_check("boundary symbol vs closed form", worst, 0.0, 1e-12));
        rep.add(make_check("fit stability", fit.stability, 0.0, opt.tol_sgo));
        rep.breakdown["boundary_symbol_fit"] = fit_json(sfit);
        rep.breakdown["boundary_residue"] = complex_json(res.boundary.value);
        rep.breakdown["interior_residue"] = 0.0;
    }
    if (opt.power > 1) {
        T310Options first = opt;
        first.power = 1;
        const auto f1 = t310_lattice_fit(first);
        rep.add(make_check("power N vs N = 1 coefficient", lhs, f1.target(), opt.tol_power));
        rep.breakdown["first_power_fit"] = fit_json(f1);
    }
    rep.breakdown["route_lhs"] = "fitted (-lambda)^-N coefficient of the tangential lattice sum";
    rep.breakdown["route_rhs"] = "-(1/2) times the residue of the log-difference";
    return rep;
}

IdentityReport verify_ex53(const Ex53Options& opt) {
    if (opt.dim == 1)
        throw UsageError("the interval model is degenerate: its boundary is 0-dimensional and carries no residue");
    if (opt.dim != 2) throw UsageError("the cylinder model is 2-dimensional");
    const CylinderSpec& c = opt.cylinder;
    c.validate();
    const double m2 = c.mass2;

    IdentityReport rep;
    rep.identity = "zeta(0) + nullity on the Dirichlet cylinder";

    const auto oracle_value = oracle::zeta_at_zero(oracle::dirichlet_product_spectrum(c));

    const auto logp = logres::log_symbol(massive_laplacian(2, m2), 2);
    Domain x;
    x.dim = 2;
    x.length = {c.circumference, c.length};

    const Expression s = normal_trace(dirichlet_resolvent_sgo(m2));
    const Expression xi = Expression::variable(Var::Xi1);
    const Expression lam = Expression::variable(Var::Lambda);
    const Expression expected = Expression(-0.25) * sym::pow(xi * xi + m2 - lam, -1);
    const bool exact = sym::structurally_equal(s, expected);

    // reduced symbol: drop the principal part, log-transform the rest termwise
    const auto parts = sym::homogeneous_expansion(s, 2, Rational(2 * opt.expansion_depth));
    if (parts.empty()) throw ConstructionError("normal trace has no homogeneous expansion");
    const Expression principal = parts.front().term;
    const Rational top = parts.front().degree + Rational(1);
    std::vector<Expression> bterms;
    const Point probe = Point().set(Var::Xi1, 1.0);
    nlohmann::json reduced = nlohmann::json::array();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const Rational d = parts[i].degree + Rational(2);
        const auto idx = static_cast<std::size_t>(sym::to_double(top - d));
        if (bterms.size() <= idx) bterms.resize(idx + 1, Expression(0));
        bterms[idx] = bterms[idx] + logres::log_transform(parts[i].term, probe);
        reduced.push_back({{"degree", sym::to_double(parts[i].degree)}, {"term", sym::to_prefix(parts[i].term, 200)}});
    }
    // the expansion depth covers degree −3, so the degree −1 slot of B is known even when empty
    if (bterms.empty()) bterms.emplace_back(0);
    const auto bsym = PolyhomSymbol::from_terms(top, 1, bterms, false);
    Domain xp;
    xp.dim = 1;
    xp.length = {2 * c.circumference, 0.0};  // two boundary circles
    const auto res = fgls_residue(logp.b, x, bsym, xp, 2);
    const std::complex<double> interior = -0.5 * res.interior.value;
    const std::complex<double> boundary = -0.5 * res.boundary.value;
    const std::complex<double> rhs = interior + boundary;

    const auto logp_prime = logres::log_symbol(massive_laplacian(1, m2), 2);
    const auto res_prime = logres::noncommutative_residue(logp_prime.b, xp);

    rep.add(make_check("heat oracle vs residue route", oracle_value.c0, rhs, opt.tol));
    rep.add(make_check("interior term vs closed form", interior, -c.area() * m2 / (4 * M_PI), 1e-10));
    rep.add(make_check("boundary term vanishes for n = 2", boundary, 0.0, 0.0));
    rep.add(make_check("normal trace equals -1/4 (P' - lambda)^-1", exact ? 0.0 : 1.0, 0.0, 0.0));
    rep.add(make_check("boundary operator residue vanishes", 0.125 * res_prime.value, 0.0, 0.0));

    rep.breakdown["zeta0"] = oracle_value.zeta0;
    rep.breakdown["nu0"] = oracle_value.nu0;
    rep.breakdown["c0"] = oracle_value.c0;
    rep.breakdown["heat_fit_drift"] = oracle_value.drift;
    rep.breakdown["interior_term"] = complex_json(interior);
    rep.breakdown["boundary_term"] = complex_json(boundary);
    rep.breakdown["normal_trace"] = sym::to_prefix(s, 300);
    rep.breakdown["subtracted_principal_part"] = sym::to_prefix(principal, 300);
    rep.breakdown["reduced_terms"] = reduced;
    rep.breakdown["cylinder"] = {{"circumference", c.circumference}, {"length", c.length}, {"mass2", m2}};
    return rep;
}

}  // namespace qtrace::bdry
