#include "doctest.h"

#include "qtrace/boundary/halfplane.hpp"
#include "qtrace/boundary/verify.hpp"
#include "qtrace/errors.hpp"
#include "qtrace/logresidue/log_symbol.hpp"
#include "qtrace/numeric/quadrature.hpp"

#include <cmath>
#include <functional>

using namespace qtrace;
using namespace qtrace::bdry;
using sym::Rational;
using sym::Var;

namespace {

const Expression xi = Expression::variable(Var::Xi1);
const Expression lam = Expression::variable(Var::Lambda);
const std::complex<double> I(0.0, 1.0);

Point at(double k, double l) { return Point().set(Var::Xi1, k).set(Var::Lambda, l); }

/// ∫₀^∞ f(z) dz split at the kink z = y.
std::complex<double> split_integral(const std::function<std::complex<double>(double)>& f, double y) {
    const auto tail = num::integrate_tail(f, y, 1e-13).value;
    return y > 0.0 ? num::integrate_interval(f, 0.0, y, 1e-13).value + tail : tail;
}

double max_gap(const PoleSum& a, const PoleSum& b) {
    double worst = 0.0;
    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) worst = std::max(worst, std::abs(a(x) - b(x)));
    return worst;
}

}  // namespace

TEST_CASE("half-plane split of 1/(xi^2 + sigma^2)") {
    const double s = 2.0;
    HalfplaneRational r{{1.0}, {{I * s, 1}, {-I * s, 1}}};
    const auto split = halfplane_split(r);
    REQUIRE(split.plus.terms.size() == 1);
    REQUIRE(split.minus.terms.size() == 1);
    CHECK(std::abs(split.plus.terms[0].pole - I * s) < 1e-15);
    CHECK(std::abs(split.plus.terms[0].coeff - 1.0 / (2.0 * I * s)) < 1e-15);
    CHECK(std::abs(split.minus.terms[0].coeff + 1.0 / (2.0 * I * s)) < 1e-15);
    for (double x : {-2.0, 0.0, 1.5}) CHECK(std::abs(split.plus(x) + split.minus(x) - r(x)) < 1e-15);
    // the plus part carries the x > 0 half of e^{−σ|x|}/(2σ)
    for (double x : {0.1, 1.0, 3.0}) {
        CHECK(std::abs(split.plus.kernel(x) - std::exp(-s * x) / (2 * s)) < 1e-15);
        CHECK(std::abs(split.minus.kernel(-x) - std::exp(-s * x) / (2 * s)) < 1e-15);
        CHECK(std::abs(split.plus.kernel(-x)) == 0.0);
    }
}

TEST_CASE("half-plane split with multiple poles") {
    // (ξ + 3) / ((ξ − i)^2 (ξ + 2i)(ξ − 1 − i))
    HalfplaneRational r{{3.0, 1.0}, {{I, 2}, {-2.0 * I, 1}, {1.0 + I, 1}}};
    const auto split = halfplane_split(r);
    for (double x : {-2.0, 0.3, 4.0}) CHECK(std::abs(split.plus(x) + split.minus(x) - r(x)) < 1e-13);
    for (const auto& t : split.plus.terms) CHECK(t.pole.imag() > 0.0);
    for (const auto& t : split.minus.terms) CHECK(t.pole.imag() < 0.0);

    const auto again = halfplane_split(HalfplaneRational::from(split.plus));
    CHECK(again.minus.empty());
    CHECK(max_gap(again.plus, split.plus) < 1e-13);
    const auto none = halfplane_split(HalfplaneRational{{0.0}, {{I, 1}}});
    CHECK(none.plus.empty());
    CHECK(none.minus.empty());
}

TEST_CASE("half-plane split refusals") {
    CHECK_THROWS_AS(halfplane_split(HalfplaneRational{{1.0}, {{1.0, 1}, {I, 1}}}), DomainError);
    CHECK_THROWS_AS(halfplane_split(HalfplaneRational{{1.0, 1.0}, {{I, 1}}}), UsageError);
}

TEST_CASE("Dirichlet resolvent kernel") {
    const auto g = dirichlet_resolvent_sgo(1.0);
    for (double k : {0.0, 1.0, 4.0})
        for (double l : {-1.0, -30.0}) {
            const auto full = full_line_resolvent(dirichlet_sigma(1.0));
            for (double y : {0.0, 0.3, 2.0}) CHECK(std::abs(full(0.0, y, at(k, l)) + g(0.0, y, at(k, l))) < 1e-15);
        }
    const Expression s = normal_trace(g);
    CHECK(sym::structurally_equal(s, Expression(-0.25) * sym::pow(xi * xi + 1.0 - lam, -1)));
}

TEST_CASE("normal trace examples") {
    const Expression rho = sym::abs_xi();
    const SGKernel g{{{rho, 0, 0, rho, rho}}};
    for (double k : {0.5, 2.0, 9.0}) CHECK(std::abs(sym::evaluate(normal_trace(g), at(k, -1.0)) - 0.5) < 1e-15);
    CHECK(normal_trace(SGKernel{}).is_zero());

    // against quadrature of the diagonal
    const auto sigma = dirichlet_sigma(2.0);
    const SGKernel h{{{sigma, 1, 2, sigma + 1, 2 * sigma}, {Expression(0.3), 0, 1, sigma, sigma}}};
    for (double k : {0.0, 1.5})
        for (double l : {-1.0, -7.0}) {
            const auto p = at(k, l);
            const auto q = num::integrate_half_line([&](double x) { return h(x, x, p); }, 1e-13);
            CHECK(std::abs(sym::evaluate(normal_trace(h), p) - q.value) < 1e-10);
        }

    const SGKernel grow{{{Expression(1), 0, 0, -rho, Expression(0)}}};
    CHECK_THROWS_AS(normal_trace(grow), DomainError);
}

TEST_CASE("composition with the truncated resolvent kernel") {
    const Expression rho = sym::abs_xi();
    const auto sigma = dirichlet_sigma(1.0);
    const SGKernel g{{{rho, 0, 0, rho, rho}}};
    const auto k = full_line_resolvent(sigma);
    const auto gk = sgo_compose(g, k);
    for (double kk : {0.7, 2.0})
        for (double l : {-1.0, -5.0}) {
            const auto p = at(kk, l);
            for (double x : {0.2, 1.1})
                for (double y : {0.0, 0.5, 2.0}) {
                    const auto q = split_integral([&](double z) { return g(x, z, p) * k(z, y, p); }, y);
                    CHECK(std::abs(gk(x, y, p) - q) < 1e-9);
                }
            CHECK(std::abs(sym::evaluate(normal_trace(gk), p) - sym::evaluate(composed_trace(g, k), p)) < 1e-12);
        }
    CHECK(sgo_compose(g, ToeplitzKernel{}).empty());
    CHECK(sgo_compose(g, SGKernel{}).empty());

    // β equal to the convolution rate and a polynomial weight in y
    const SGKernel same{{{Expression(1), 1, 2, sigma, sigma}}};
    const auto sk = sgo_compose(same, k);
    const auto p = at(1.0, -2.0);
    for (double y : {0.0, 0.8}) {
        const auto q = split_integral([&](double z) { return same(0.6, z, p) * k(z, y, p); }, y);
        CHECK(std::abs(sk(0.6, y, p) - q) < 1e-9);
    }
    CHECK(std::abs(sym::evaluate(normal_trace(sk), p) - sym::evaluate(composed_trace(same, k), p)) < 1e-12);
}

TEST_CASE("composition is associative on exponential kernels") {
    const auto sigma = dirichlet_sigma(1.0);
    const SGKernel a{{{Expression(2), 1, 0, sigma, sigma + 1}}};
    const SGKernel b{{{Expression(-1), 0, 1, Expression(0.5), sigma}, {Expression(0.25), 2, 0, sigma, Expression(3)}}};
    const SGKernel c{{{Expression(1), 1, 1, Expression(1.5), sigma}}};
    const auto left = sgo_compose(sgo_compose(a, b), c);
    const auto right = sgo_compose(a, sgo_compose(b, c));
    const auto p = at(0.8, -3.0);
    for (double x : {0.0, 0.4, 1.7})
        for (double y : {0.1, 2.2}) CHECK(std::abs(left(x, y, p) - right(x, y, p)) < 1e-12);
}

TEST_CASE("boundary residue") {
    // A = 1 with L = log P₁ − log P₂ on a cylinder of length 1: interior only
    const auto l = logres::log_difference_symbol(
        param::DifferentialOperator::from_symbol(sym::parse_prefix("(add (pow xi1 2) (pow xi2 2) 2)"), 2),
        param::DifferentialOperator::from_symbol(sym::parse_prefix("(add (pow xi1 2) (pow xi2 2) 1)"), 2), 2);
    Domain x;
    x.dim = 2;
    x.length = {2 * M_PI, 1.0};
    const auto r = fgls_residue(l, x, std::nullopt, Domain{1}, 2);
    CHECK(std::abs(r.value - 1.0) < 1e-12);
    CHECK(!r.boundary_present);
    CHECK(r.value == logres::noncommutative_residue(l, x).value);

    const auto half = PolyhomSymbol::from_terms(Rational(-1, 2), 1, {Expression(1)});
    CHECK(fgls_residue(std::nullopt, x, half, Domain{1}, 2).value == std::complex<double>(0.0));

    const auto tr = normal_trace(SGKernel{{{sym::abs_xi(), 0, 0, sym::abs_xi(), sym::abs_xi()}}});
    const auto constant = PolyhomSymbol::from_terms(Rational(0), 1, {tr});
    CHECK(fgls_residue(std::nullopt, x, constant, Domain{1}, 2).value == std::complex<double>(0.0));

    const auto minus_one = PolyhomSymbol::from_terms(Rational(-1), 1, {sym::pow(sym::abs_xi(), -1)});
    CHECK(std::abs(fgls_residue(std::nullopt, x, minus_one, Domain{1}, 2).value - 2.0) < 1e-12);
    CHECK_THROWS_AS(fgls_residue(l, x, std::nullopt, Domain{1}, 1), UsageError);
}

TEST_CASE("cylinder model with A = I") {
    const auto rep = verify_t310_model({});
    CHECK(rep.pass);
    CHECK(std::abs(rep.rhs + 0.5) < 1e-10);
    CHECK(std::abs(rep.lhs + 0.5) < 1e-4);

    T310Options same;
    same.mass1 = same.mass2 = 1.0;
    const auto zero = verify_t310_model(same);
    CHECK(zero.pass);
    CHECK(std::abs(zero.lhs) < 1e-9);
    CHECK(zero.rhs == std::complex<double>(0.0));

    T310Options second;
    second.power = 2;
    const auto p2 = verify_t310_model(second);
    CHECK(p2.pass);
    CHECK(std::abs(p2.lhs + 0.5) < 1e-3);

    T310Options bad;
    bad.a = "other";
    CHECK_THROWS_AS(verify_t310_model(bad), UsageError);
}

TEST_CASE("cylinder model with a singular Green operator") {
    T310Options o;
    o.a = "sgo";
    const auto rep = verify_t310_model(o);
    CHECK(rep.pass);
    CHECK(std::abs(rep.rhs + 0.25) < 1e-6);
    CHECK(std::abs(rep.lhs - rep.rhs) < 1e-3 * 0.25);
}

TEST_CASE("Dirichlet cylinder zeta value") {
    const auto rep = verify_ex53({});
    CHECK(rep.pass);
    CHECK(std::abs(rep.rhs + M_PI / 2) < 1e-12);
    CHECK(std::abs(rep.lhs + M_PI / 2) < 1e-3);
    CHECK(rep.breakdown["boundary_term"][0].get<double>() == 0.0);
    CHECK(rep.breakdown["subtracted_principal_part"].get<std::string>().find("-1/4") != std::string::npos);

    Ex53Options flat;
    flat.cylinder.mass2 = 0.0;
    const auto z = verify_ex53(flat);
    CHECK(z.pass);
    CHECK(std::abs(z.rhs) == 0.0);
    CHECK(std::abs(z.lhs) < 1e-4);

    Ex53Options interval;
    interval.dim = 1;
    CHECK_THROWS_AS(verify_ex53(interval), UsageError);
}
