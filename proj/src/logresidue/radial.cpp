#include "qtrace/logresidue/radial.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/logresidue/residue.hpp"

#include <cmath>

namespace qtrace::logres {

using sym::Var;

RadialReport radial_reduce(const Expression& f, int n, int m, const std::array<double, 2>& x, int sphere_degree) {
    if (m <= 0) throw UsageError("radial reduction needs m > 0");
    RadialReport rep;
    rep.dim = n;
    rep.m = m;
    if (f.is_zero()) return rep;
    const sym::Program prog(f);
    const auto rule = sym::sphere_quadrature(n, sphere_degree);

    auto probe = [&](double rho) {
        double g = 0.0;
        for (const auto& w : rule.nodes) {
            Point p;
            p.set(Var::X1, x[0]).set(Var::X2, x[1]).set(Var::Lambda, -1.0);
            p.set(Var::Xi1, rho * w[0]);
            if (n == 2) p.set(Var::Xi2, rho * w[1]);
            g = std::max(g, std::abs(prog(p)));
        }
        return g;
    };
    const double g1 = probe(1e-4);
    const double g2 = probe(1e-3);
    rep.radial_slope = (g1 == 0.0 || g2 == 0.0) ? INFINITY : std::log10(g2 / g1);
    if (rep.radial_slope <= -n + 0.05)
        throw DecayError("integrand is not integrable at xi = 0: radial exponent " + sym::format_number(rep.radial_slope) +
                         " needs r > -n");

    rep.lhs = covariable_integral(prog, x, rule);
    complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        Point p;
        p.set(Var::X1, x[0]).set(Var::X2, x[1]).set(Var::Xi1, rule.nodes[i][0]);
        if (n == 2) p.set(Var::Xi2, rule.nodes[i][1]);
        acc += rule.weights[i] * line_integral(prog, p).value;
    }
    rep.rhs = acc / static_cast<double>(m);
    rep.diff = std::abs(rep.lhs - rep.rhs);
    return rep;
}

}  // namespace qtrace::logres
