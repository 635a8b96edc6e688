#include "qtrace/logresidue/residue.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/parametrix/calculus.hpp"

#include <cmath>

namespace qtrace::logres {

using sym::Var;

double Domain::volume() const { return dim == 1 ? length[0] : length[0] * length[1]; }

std::vector<std::array<double, 2>> Domain::nodes() const {
    std::vector<std::array<double, 2>> out;
    const int n2 = dim == 1 ? 1 : grid[1];
    for (int i = 0; i < grid[0]; ++i)
        for (int k = 0; k < n2; ++k)
            out.push_back({length[0] * i / grid[0], dim == 1 ? 0.0 : length[1] * k / grid[1]});
    return out;
}

double Domain::cell() const {
    double c = length[0] / grid[0];
    if (dim == 2) c *= length[1] / grid[1];
    return c;
}

namespace {

Point at_x(const std::array<double, 2>& x) {
    Point p;
    p.set(Var::X1, x[0]).set(Var::X2, x[1]);
    return p;
}

void set_xi(Point& p, const std::array<double, 2>& w, double r, int dim) {
    p.set(Var::Xi1, r * w[0]);
    if (dim == 2) p.set(Var::Xi2, r * w[1]);
}

}  // namespace

complex cosphere_integral(const sym::Program& e, const std::array<double, 2>& x, const sym::SphereRule& rule) {
    complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        Point p = at_x(x);
        set_xi(p, rule.nodes[i], 1.0, rule.dim);
        acc += rule.weights[i] * e(p);
    }
    return acc;
}

complex covariable_integral(const sym::Program& f, const std::array<double, 2>& x, const sym::SphereRule& rule,
                            double tol) {
    complex acc(0.0, 0.0);
    const int n = rule.dim;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto& w = rule.nodes[i];
        const auto q = num::integrate_half_line(
            [&](double r) {
                if (r == 0.0 && n > 1) return complex(0.0, 0.0);
                Point p = at_x(x);
                p.set(Var::Lambda, -1.0);
                set_xi(p, w, r, n);
                return f(p) * std::pow(r, n - 1);
            },
            tol);
        acc += rule.weights[i] * q.value;
    }
    return acc;
}

ResidueValue noncommutative_residue(const PolyhomSymbol& a, const Domain& domain, int sphere_degree, int norm_dim) {
    const int n = domain.dim;
    if (a.dim() != n) throw UsageError("symbol dimension differs from the domain's");
    ResidueValue out;
    out.degree = Rational(-n);
    out.x_volume = domain.volume();
    const Rational j = a.order() + Rational(n);
    if (sym::is_integer(j) && j >= 0 && j.numerator() > a.depth() && !a.complete())
        throw UsageError("symbol is truncated above degree -n; raise the expansion depth");
    if (!a.has_degree(out.degree)) return out;
    out.term_present = true;
    const auto rule = sym::sphere_quadrature(n, sphere_degree, norm_dim);
    out.sphere_nodes = static_cast<int>(rule.nodes.size());
    out.normalization = rule.normalization;
    out.norm_dim = rule.norm_dim;
    const Expression term = a.term_of_degree(out.degree);
    const sym::Program prog(term);
    if (!term.depends_on_x()) {
        const complex v = cosphere_integral(prog, {0.0, 0.0}, rule);
        out.samples.push_back({{0.0, 0.0}, v});
        out.value = v * domain.volume();
        return out;
    }
    complex acc(0.0, 0.0);
    for (const auto& x : domain.nodes()) {
        const complex v = cosphere_integral(prog, x, rule);
        out.samples.push_back({x, v});
        acc += v;
    }
    out.value = acc * domain.cell();
    return out;
}

complex c0_density(const ParamTerm& term, const std::array<double, 2>& x, int sphere_degree) {
    if (term.is_zero()) return {0.0, 0.0};
    const auto rule = sym::sphere_quadrature(term.dim(), sphere_degree);
    return covariable_integral(sym::Program(term.to_expression()), x, rule);
}

C0Report c0_interior(const ParamSymbol& s, const Rational& j_star, const Domain& domain, int sphere_degree) {
    C0Report out;
    if (!sym::is_integer(j_star) || j_star < 0) return out;
    const int j = static_cast<int>(j_star.numerator());
    out.j_star = j;
    out.degree = s.order() - j_star;
    if (!s.has_term(j)) throw UsageError("expansion depth is below the index j* = " + std::to_string(j));
    const ParamTerm term = s.term(j);
    if (term.is_zero()) return out;
    out.term_present = true;
    const auto integ = param::integrability_report(term, domain.dim);
    if (!integ.integrable)
        throw DecayError("C0 density integrand is not integrable at xi = 0 (r = " + sym::to_string(integ.min_r) +
                         " <= -n)");
    const auto rule = sym::sphere_quadrature(domain.dim, sphere_degree);
    const Expression e = term.to_expression();
    const sym::Program prog(e);
    if (!e.depends_on_x()) {
        const complex v = covariable_integral(prog, {0.0, 0.0}, rule);
        out.density.push_back({{0.0, 0.0}, v});
        out.value = v * domain.volume();
        return out;
    }
    complex acc(0.0, 0.0);
    for (const auto& x : domain.nodes()) {
        const complex v = covariable_integral(prog, x, rule);
        out.density.push_back({x, v});
        acc += v;
    }
    out.value = acc * domain.cell();
    return out;
}

}  // namespace qtrace::logres
