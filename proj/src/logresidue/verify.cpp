#include "qtrace/logresidue/verify.hpp"

#include "qtrace/errors.hpp"

#include <cmath>

namespace qtrace::logres {

using sym::Var;

namespace {

int depth_for(const Rational& j_star, const VerifyOptions& opt) {
    const double j = std::ceil(sym::to_double(j_star));
    return std::max(0, static_cast<int>(j)) + opt.extra_depth;
}

nlohmann::json normalization_json(int n) {
    return {{"interior_cosphere", std::pow(2 * M_PI, -n)},
            {"interior_convention", "(2pi)^-n on S^(n-1)"},
            {"boundary_cosphere", std::pow(2 * M_PI, -(n - 1))},
            {"boundary_convention", "(2pi)^-(n-1) on the boundary cosphere"}};
}

nlohmann::json point_json(const std::array<double, 2>& x, int n) {
    return n == 1 ? nlohmann::json::array({x[0]}) : nlohmann::json::array({x[0], x[1]});
}

/// C₀ route (term j* of `s` integrated at λ = −1) against −(1/m) res(`r`).
IdentityReport compare_routes(const std::string& identity, const ParamSymbol& s, const Rational& j_star,
                              const PolyhomSymbol& r, int m, const VerifyOptions& opt) {
    const int n = s.dim();
    IdentityReport rep;
    rep.identity = identity;
    Domain integ;
    integ.dim = n;
    integ.grid = {opt.integration_grid, opt.integration_grid};
    const C0Report c0 = c0_interior(s, j_star, integ, opt.sphere_degree);
    const ResidueValue res = noncommutative_residue(r, integ, opt.sphere_degree);
    const complex rhs = -res.value / static_cast<double>(m);
    rep.add(make_check("integrated", c0.value, rhs, opt.tol_integrated));

    Domain grid = integ;
    grid.grid = {opt.grid, opt.grid};
    const bool integer_index = sym::is_integer(j_star) && j_star >= 0;
    const ParamTerm term = integer_index ? s.term(static_cast<int>(j_star.numerator())) : ParamTerm();
    const Expression bn = r.term_of_degree(Rational(-n));
    const sym::Program bprog(bn);
    const auto rule = sym::sphere_quadrature(n, opt.sphere_degree);
    nlohmann::json density = nlohmann::json::array();
    Check worst = make_check("pointwise", 0.0, 0.0, opt.tol_pointwise);
    for (const auto& x : grid.nodes()) {
        const complex lhs = integer_index ? c0_density(term, x, opt.sphere_degree) : complex(0.0, 0.0);
        const complex rv = bn.is_zero() ? complex(0.0, 0.0) : -cosphere_integral(bprog, x, rule) / static_cast<double>(m);
        density.push_back({{"x", point_json(x, n)}, {"lhs", complex_json(lhs)}, {"rhs", complex_json(rv)}});
        const Check c = make_check("pointwise", lhs, rv, opt.tol_pointwise);
        if (c.abs_err >= worst.abs_err) worst = c;
    }
    rep.add(worst);

    if (!opt.ray_angles.empty() && integer_index && !term.is_zero()) {
        const sym::Program qprog(term.to_expression());
        Check worst_ray = make_check("per-ray", 0.0, 0.0, opt.tol_pointwise);
        nlohmann::json rays = nlohmann::json::array();
        for (const auto& x : grid.nodes())
            for (double ang : opt.ray_angles) {
                const std::array<double, 2> w =
                    n == 1 ? std::array<double, 2>{std::cos(ang) >= 0 ? 1.0 : -1.0, 0.0}
                           : std::array<double, 2>{std::cos(ang), std::sin(ang)};
                const auto q = num::integrate_half_line([&](double rho) {
                    Point p;
                    p.set(Var::X1, x[0]).set(Var::X2, x[1]).set(Var::Lambda, -1.0).set(Var::Xi1, rho * w[0]);
                    if (n == 2) p.set(Var::Xi2, rho * w[1]);
                    return qprog(p) * std::pow(rho, n - 1);
                });
                Point p;
                p.set(Var::X1, x[0]).set(Var::X2, x[1]).set(Var::Xi1, w[0]);
                if (n == 2) p.set(Var::Xi2, w[1]);
                const complex rv = bn.is_zero() ? complex(0.0, 0.0) : -bprog(p) / static_cast<double>(m);
                rays.push_back({{"x", point_json(x, n)}, {"angle", ang}, {"lhs", complex_json(q.value)},
                                {"rhs", complex_json(rv)}});
                const Check c = make_check("per-ray", q.value, rv, opt.tol_pointwise);
                if (c.abs_err >= worst_ray.abs_err) worst_ray = c;
            }
        rep.add(worst_ray);
        rep.breakdown["rays"] = rays;
    }

    rep.breakdown["dim"] = n;
    rep.breakdown["m"] = m;
    rep.breakdown["j_star"] = sym::to_string(j_star);
    rep.breakdown["c0_term_present"] = c0.term_present;
    rep.breakdown["residue_term_present"] = res.term_present;
    rep.breakdown["residue"] = complex_json(res.value);
    rep.breakdown["normalization"] = normalization_json(n);
    rep.breakdown["sphere_nodes"] = res.sphere_nodes;
    rep.breakdown["integration_grid"] = opt.integration_grid;
    rep.breakdown["density"] = density;
    nlohmann::json warnings = nlohmann::json::array();
    for (const auto& w : s.warnings()) warnings.push_back(w);
    for (const auto& w : r.warnings()) warnings.push_back(w);
    rep.breakdown["warnings"] = warnings;
    return rep;
}

}  // namespace

IdentityReport verify_t14(const DifferentialOperator& p, const VerifyOptions& opt) {
    const int n = p.dim();
    const int m = p.order();
    if (m <= 0) throw UsageError("C0(P) = -res(log P)/m needs positive order m");
    const Rational j_star(n);
    const int depth = depth_for(j_star, opt);
    const ParamSymbol q = param::resolvent_expansion(p, depth);
    const LogSymbol ls = log_symbol(p, depth);
    IdentityReport rep = compare_routes("C0(P) = -(1/m) res(log P)", q, j_star, ls.b, m, opt);
    rep.breakdown["depth"] = depth;
    return rep;
}

IdentityReport verify_t22(const PolyhomSymbol& a, const DifferentialOperator& p1, const DifferentialOperator& p2,
                          const VerifyOptions& opt) {
    if (p1.order() != p2.order()) throw UsageError("trace defect of a difference needs equal orders");
    const int n = p1.dim();
    const int m = p1.order();
    const Rational j_star = Rational(n) + a.order();
    if (!(Rational(m) > j_star))
        throw UsageError("C0(A,P1) - C0(A,P2) = -res(A(log P1 - log P2))/m needs m > n + sigma");
    const int depth = depth_for(j_star, opt);
    const ParamSymbol s = param::compose_param(a, param::resolvent_difference(p1, p2, depth), depth);
    const PolyhomSymbol r = param::compose(a, log_difference_symbol(p1, p2, depth), depth);
    IdentityReport rep =
        compare_routes("C0(A,P1) - C0(A,P2) = -(1/m) res(A(log P1 - log P2))", s, j_star, r, m, opt);
    rep.breakdown["depth"] = depth;
    rep.breakdown["sigma"] = sym::to_string(a.order());
    rep.breakdown["index_is_integer"] = sym::is_integer(j_star);
    return rep;
}

IdentityReport verify_t23(const PolyhomSymbol& a, const PolyhomSymbol& a_prime, const DifferentialOperator& p,
                          const VerifyOptions& opt) {
    const int n = p.dim();
    const int m = p.order();
    const Rational j_star = Rational(n) + a.order() + a_prime.order();
    const int depth = depth_for(j_star, opt);
    const ParamSymbol s = param::commutator_resolvent_terms(a, a_prime, p, depth);
    const PolyhomSymbol h = log_transform_terms(s);
    IdentityReport rep = compare_routes("C0([A,A'],P) = -(1/m) res(A[A', log P])", s, j_star, h, m, opt);
    rep.breakdown["depth"] = depth;
    rep.breakdown["sigma"] = sym::to_string(a.order());
    rep.breakdown["sigma_prime"] = sym::to_string(a_prime.order());
    return rep;
}

}  // namespace qtrace::logres
