#include "doctest.h"

#include "qtrace/errors.hpp"
#include "qtrace/logresidue/radial.hpp"
#include "qtrace/logresidue/verify.hpp"

#include <cmath>

using namespace qtrace;
using namespace qtrace::sym;
using namespace qtrace::param;
using namespace qtrace::logres;

namespace {

const Expression xi = Expression::variable(Var::Xi1);
const Expression xi2 = Expression::variable(Var::Xi2);
const Expression lam = Expression::variable(Var::Lambda);

DifferentialOperator op(const std::string& s, int dim = 1) { return DifferentialOperator::from_symbol(parse_prefix(s), dim); }

complex at(const Expression& e, double x, double k, double k2 = 0.0) {
    Point p;
    p.set(Var::X1, x).set(Var::X2, 0.0).set(Var::Xi1, k).set(Var::Xi2, k2);
    return evaluate(e, p);
}

}  // namespace

TEST_CASE("keyhole identity on the rational family") {
    const auto r1 = contour_check(pow(Expression(1) - lam, -2), KeyholeContour{});
    CHECK(r1.pass);
    CHECK(std::abs(r1.line_value - 1.0) < 1e-10);
    CHECK(std::abs(r1.contour_value - 1.0) < 1e-8);
    CHECK(std::abs(r1.transform_value + 1.0) < 1e-10);
    const auto r2 = contour_check(pow(Expression(1) - lam, -1) * pow(Expression(2) - lam, -1), KeyholeContour{});
    CHECK(r2.pass);
    CHECK(std::abs(r2.line_value - std::log(2.0)) < 1e-10);
    CHECK(std::abs(r2.contour_value - std::log(2.0)) < 1e-8);
    const auto r0 = contour_check(Expression(0), KeyholeContour{});
    CHECK(r0.pass);
    CHECK(r0.contour_value == complex(0.0, 0.0));
    // complex conjugate pole pair and a triple pole
    const Expression f = pow(pow(lam - 3, 2) + 1, -1) * pow(Expression(5) - lam, -3);
    CHECK(contour_check(f, KeyholeContour{}).pass);
}

TEST_CASE("keyhole identity refusals") {
    CHECK_THROWS_AS(contour_check(pow(Expression(1) - lam, -1), KeyholeContour{}), DecayError);
    KeyholeContour through;
    through.inner_radius = 1.0;  // passes through the pole at λ = 1
    CHECK_THROWS_AS(contour_check(pow(Expression(1) - lam, -2), through), ContourError);
}

TEST_CASE("branch jump of the logarithm") {
    const complex up = std::log(std::polar(2.0, M_PI));
    const complex down = std::log(std::polar(2.0, -M_PI + 1e-15));
    CHECK(std::abs((up - down) - complex(0, 2 * M_PI)) < 1e-12);
}

TEST_CASE("radial reduction anchors") {
    const auto r1 = radial_reduce(rpow(pow(xi, 2) - lam, Rational(-3, 2)), 1, 2);
    CHECK(std::abs(r1.lhs - 1 / M_PI) < 1e-10);
    CHECK(std::abs(r1.rhs - 1 / M_PI) < 1e-10);
    const auto r2 = radial_reduce(pow(pow(xi, 2) + pow(xi2, 2) - lam, -2), 2, 2);
    CHECK(std::abs(r2.lhs - 1 / (4 * M_PI)) < 1e-10);
    CHECK(std::abs(r2.rhs - 1 / (4 * M_PI)) < 1e-10);
    CHECK(radial_reduce(Expression(0), 1, 2).diff == 0.0);
    CHECK_THROWS_AS(radial_reduce(pow(xi, -2) * pow(pow(xi, 2) - lam, -1), 1, 2), DecayError);
}

TEST_CASE("log symbol examples") {
    const auto lap = log_symbol(op("(add (pow xi1 2) (pow xi2 2))", 2), 2);
    for (int j = 0; j <= 2; ++j) CHECK(std::abs(at(lap.b.term(j), 0.3, 0.6, -0.8)) < 1e-14);
    const auto mass = log_symbol(op("(add (pow xi1 2) 2)"), 2);
    CHECK(mass.b.term(1).is_zero());
    CHECK(std::abs(at(mass.b.term(2), 0.0, 1.7) - 2.0 / (1.7 * 1.7)) < 1e-14);
    const auto var = log_symbol(op("(add (pow xi1 2) 2 (cos 1 x1))"), 2);
    for (double x : {0.0, 1.1, 2.5}) CHECK(std::abs(at(var.b.term(2), x, 1.3) - (2 + std::cos(x)) / 1.69) < 1e-13);
    // b₀ from the closed form against a contour quadrature of log λ q_{−m}
    const auto quartic = op("(add (pow xi1 4) 1)");
    const Expression q0 = pow(Expression(2) * pow(xi, 4) - lam, -1);  // p_m = 2ξ⁴ for 2∂⁴
    const auto l2 = log_symbol(op("(mul 2 (pow xi1 4))"), 0);
    Point p;
    p.set(Var::Xi1, 1.0).set(Var::X1, 0.0);
    KeyholeContour k;
    k.inner_radius = 0.5;
    k.outer_radius = 10.0;
    const complex contour = contour_log_integral(Program(q0), k, p);
    CHECK(std::abs(-contour - evaluate(l2.b.term(0), p)) < 1e-4);
    CHECK_THROWS_AS(log_symbol(op("(mul -1 (pow xi1 2))"), 1), ConstructionError);
    (void)quartic;
}

TEST_CASE("log difference symbol") {
    const auto l = log_difference_symbol(op("(add (pow xi1 2) 2)"), op("(add (pow xi1 2) 1)"), 2);
    CHECK(std::abs(at(l.term(2), 0, 1.4) - 1 / 1.96) < 1e-14);
    const auto same = log_difference_symbol(op("(add (pow xi1 2) 2)"), op("(add (pow xi1 2) 2)"), 3);
    for (const auto& t : same.terms()) CHECK(t.is_zero());
    // l equals b(P₁) − b(P₂)
    const auto p1 = op("(add (pow xi1 2) 3 (cos 1 x1))");
    const auto p2 = op("(add (pow xi1 2) 1 (sin 1 x1))");
    const auto b1 = log_symbol(p1, 3), b2 = log_symbol(p2, 3);
    const auto d = log_difference_symbol(p1, p2, 3);
    for (int j = 1; j <= 3; ++j)
        for (double x : {0.4, 2.0}) CHECK(std::abs(at(d.term(j), x, 1.9) - at(b1.b.term(j) - b2.b.term(j), x, 1.9)) < 1e-9);
    // squares: the fourth-order route doubles the second-order classical part
    const auto s1 = op("(add (pow xi1 2) 3 (cos 1 x1))").power(2);
    const auto s2 = op("(add (pow xi1 2) 2 (cos 1 x1))").power(2);
    const auto l4 = log_difference_symbol(s1, s2, 2);
    for (double x : {0.0, 1.3}) CHECK(std::abs(at(l4.term(2), x, 1.6) - 2.0 / (1.6 * 1.6)) < 1e-10);
    // different principal symbols go through the two-base closed form
    const auto dp = log_difference_symbol(op("(mul 2 (pow xi1 2))"), op("(pow xi1 2)"), 0);
    CHECK(std::abs(at(dp.term(0), 0, 1.3) - std::log(2.0)) < 1e-13);
}

TEST_CASE("log commutator symbol") {
    const auto ap = PolyhomSymbol::from_terms(Rational(1), 1, {abs_xi()});
    const auto h0 = log_commutator_symbol(PolyhomSymbol::constant(Expression(1), 1), ap, op("(add (pow xi1 4) 1)"), 2);
    for (const auto& t : h0.terms()) CHECK(t.is_zero());
    const auto a = PolyhomSymbol::from_terms(Rational(0), 1, {expi(1)});
    // With an even operator the degree −1 term cancels; a third-order perturbation keeps it.
    const auto p = op("(add (pow xi1 2) 2 (cos 1 x1))").power(2);
    const auto h = log_commutator_symbol(a, ap, p, 2);
    CHECK(h.order() == Rational(1));
    CHECK(h.term(2).is_zero());
    const auto odd = p + op("(mul (c 0 -0.5) (cos 1 x1) (pow xi1 3))");
    CHECK_FALSE(log_commutator_symbol(a, ap, odd, 2).term(2).is_zero());
}

TEST_CASE("noncommutative residue examples") {
    Domain t2;
    t2.dim = 2;
    const auto ls = log_symbol(op("(add (pow xi1 2) (pow xi2 2) 3)", 2), 2);
    CHECK(std::abs(noncommutative_residue(ls.b, t2).value - 2 * M_PI * 3.0) < 1e-12);
    Domain t1;
    const auto a = PolyhomSymbol::from_terms(Rational(-1), 1, {pow(abs_xi(), -1)});
    CHECK(std::abs(noncommutative_residue(a, t1).value - 2.0) < 1e-14);
    const auto half = PolyhomSymbol::from_terms(Rational(1, 2), 1, {rpow(abs_xi(), Rational(1, 2)), Expression(0)});
    const auto r = noncommutative_residue(half, t1);
    CHECK_FALSE(r.term_present);
    CHECK(r.value == complex(0.0, 0.0));
}

TEST_CASE("C0 interior examples") {
    Domain t2;
    t2.dim = 2;
    const auto q = resolvent_expansion(op("(add (pow xi1 2) (pow xi2 2) 1)", 2), 2);
    const auto c = c0_interior(q, Rational(2), t2);
    CHECK(std::abs(c.value + M_PI) < 1e-9);
    CHECK(std::abs(c.density.front().value + 1 / (4 * M_PI)) < 1e-11);
    Domain t1;
    const auto q1 = resolvent_expansion(op("(pow xi1 2)"), 1);
    CHECK(c0_interior(q1, Rational(1), t1).value == complex(0.0, 0.0));
    const auto d = resolvent_difference(op("(add (pow xi1 2) 2)"), op("(add (pow xi1 2) 1)"), 1);
    CHECK(c0_interior(d, Rational(1), t1).value == complex(0.0, 0.0));
}

TEST_CASE("constant term of P against res(log P)") {
    VerifyOptions opt;
    opt.ray_angles = {0.3, 2.0};
    const auto r = verify_t14(op("(add (pow xi1 2) (pow xi2 2) 1)", 2), opt);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs + M_PI) < 1e-8);
    CHECK(std::abs(r.rhs + M_PI) < 1e-8);
    const auto z = verify_t14(op("(pow xi1 2)"));
    CHECK(z.pass);
    CHECK(std::abs(z.lhs) == 0.0);
    const auto v = verify_t14(op("(add (pow xi1 2) 2 (cos 1 x1))"), opt);
    CHECK(v.pass);
    CHECK(std::abs(v.lhs) < 1e-12);
    CHECK_THROWS_AS(verify_t14(op("(mul -1 (pow xi1 2))")), ConstructionError);
}

TEST_CASE("constant term differences against the log-difference residue") {
    const auto a = PolyhomSymbol::from_terms(Rational(1), 1, {abs_xi()});
    const auto p1 = op("(add (pow xi1 2) 3 (cos 1 x1))").power(2);
    const auto p2 = op("(add (pow xi1 2) 2 (cos 1 x1))").power(2);
    const auto r = verify_t22(a, p1, p2);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs + 1.0) < 1e-6);
    CHECK(std::abs(r.rhs + 1.0) < 1e-9);
    const auto same = verify_t22(a, p1, p1);
    CHECK(same.pass);
    CHECK(std::abs(same.lhs) == 0.0);
    const auto half = PolyhomSymbol::from_terms(Rational(1, 2), 1, {rpow(abs_xi(), Rational(1, 2))});
    const auto h = verify_t22(half, p1, p2);
    CHECK(h.pass);
    CHECK(h.lhs == complex(0.0, 0.0));
    CHECK(h.rhs == complex(0.0, 0.0));
    CHECK_THROWS_AS(verify_t22(a, op("(add (pow xi1 2) 1)"), op("(add (pow xi1 2) 2)")), UsageError);
}

TEST_CASE("commutator constant terms") {
    const auto d = PolyhomSymbol::from_terms(Rational(1), 1, {xi});
    const auto e = PolyhomSymbol::from_terms(Rational(0), 1, {expi(1)});
    const auto c = verify_t23(e, d, op("(add (pow xi1 4) 1)"));
    CHECK(c.pass);
    CHECK(std::abs(c.lhs) == 0.0);
    const auto ap = PolyhomSymbol::from_terms(Rational(1), 1, {abs_xi()});
    const auto p = op("(add (pow xi1 2) 2 (cos 1 x1))").power(2);
    const auto r = verify_t23(e, ap, p);
    CHECK(r.pass);
    CHECK(r.lhs == complex(0.0, 0.0));
    const auto odd = verify_t23(e, ap, p + op("(mul (c 0 -0.5) (cos 1 x1) (pow xi1 3))"));
    CHECK(odd.pass);
    CHECK(std::abs(odd.lhs - complex(0.0, -0.125)) < 1e-8);
    CHECK(std::abs(odd.rhs - complex(0.0, -0.125)) < 1e-8);
}
