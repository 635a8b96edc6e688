#include "doctest.h"

#include "qtrace/errors.hpp"
#include "qtrace/parametrix/calculus.hpp"
#include "qtrace/symexpr/evaluate.hpp"
#include "qtrace/symexpr/homogeneity.hpp"

#include <cmath>

using namespace qtrace;
using namespace qtrace::sym;
using namespace qtrace::param;

namespace {

const Expression xi = Expression::variable(Var::Xi1);
const Expression lam = Expression::variable(Var::Lambda);

DifferentialOperator op(const std::string& s, int dim = 1) { return DifferentialOperator::from_symbol(parse_prefix(s), dim); }

complex eval_at(const Expression& e, double x, double k, complex l) {
    Point p;
    p.set(Var::X1, x).set(Var::X2, 0.2).set(Var::Xi1, k).set(Var::Lambda, l);
    return evaluate(e, p);
}

}  // namespace

TEST_CASE("compose examples") {
    const auto a = PolyhomSymbol::from_terms(Rational(1), 1, {xi});
    const auto e = PolyhomSymbol::from_terms(Rational(0), 1, {expi(1)});
    const auto ae = compose(a, e, 2);
    const Expression total = ae.term(0) + ae.term(1);
    CHECK(std::abs(eval_at(total, 0.4, 1.7, 0) - std::polar(1.0, 0.4) * 2.7) < 1e-14);
    const auto ea = compose(e, a, 2);
    CHECK(ea.term(1).is_zero());
    const auto one = compose(a, PolyhomSymbol::constant(Expression(1), 1), 2);
    CHECK(structurally_equal(one.term(0), xi));
}

TEST_CASE("fourth-order symbol of a squared operator") {
    const auto p = op("(add (pow xi1 2) 2 (cos 1 x1))").power(2);
    CHECK(p.order() == 4);
    // ξ⁴ + 2vξ² − 2iv′ξ + v² − v″
    const double x = 0.9, k = 1.3;
    const double v = 2 + std::cos(x), v1 = -std::sin(x), v2 = -std::cos(x);
    const complex want = std::pow(k, 4) + 2 * v * k * k - complex(0, 2) * v1 * k + v * v - v2;
    CHECK(std::abs(eval_at(p.full_symbol(), x, k, 0) - want) < 1e-12);
}

TEST_CASE("resolvent expansion: -d^2 + m^2") {
    const auto q = resolvent_expansion(op("(add (pow xi1 2) 2)"), 4);
    CHECK(q.term(1).is_zero());
    const Expression q4 = q.term(2).to_expression();
    for (double k : {0.5, 1.5})
        CHECK(std::abs(eval_at(q4, 0, k, -1.0) + 2.0 / std::pow(k * k + 1, 2)) < 1e-14);
    // Partial sum equals the Taylor truncation in m².
    Expression sum;
    for (const auto& t : q.terms()) sum = sum + t.to_expression();
    const double k = 2.1;
    const complex l(-0.4, 0.3);
    const complex s = k * k - l;
    const complex taylor = 1.0 / s - 2.0 / (s * s) + 4.0 / (s * s * s);
    CHECK(std::abs(eval_at(sum, 0, k, l) - taylor) < 1e-12 * std::abs(taylor));
}

TEST_CASE("resolvent expansion: -d^2 + v(x)") {
    const auto q = resolvent_expansion(op("(add (pow xi1 2) 2 (cos 1 x1))"), 3);
    const Expression q5 = q.term(3).to_expression();
    for (double x : {0.3, 1.7})
        for (double k : {0.8, 2.0}) {
            const complex l(-1.2, 0.4);
            const complex want = complex(0, -2) * k * (-std::sin(x)) * std::pow(k * k - l, -3.0);
            CHECK(std::abs(eval_at(q5, x, k, l) - want) < 1e-13);
        }
    for (int j = 1; j <= 3; ++j) {
        for (const auto& c : q.term(j).certificates()) {
            CHECK(c.nu >= 2);
            CHECK(c.nu <= 2 * j + 1);
            CHECK(c.r == Rational(-j + (c.nu - 1) * 2));
        }
        CHECK(homogeneity_check(q.term(j).to_expression(), Rational(-2 - j), 1, 2).pass);
    }
}

TEST_CASE("resolvent expansion: Laplacian on T2 has no lower terms") {
    const auto q = resolvent_expansion(op("(add (pow xi1 2) (pow xi2 2))", 2), 3);
    for (int j = 1; j <= 3; ++j) CHECK(q.term(j).is_zero());
}

TEST_CASE("resolvent difference") {
    const auto d = resolvent_difference(op("(add (pow xi1 2) 2)"), op("(add (pow xi1 2) 1)"), 2);
    const Expression d4 = d.term(2).to_expression();
    CHECK(std::abs(eval_at(d4, 0, 1.1, -0.5) + std::pow(1.21 + 0.5, -2)) < 1e-14);
    const auto same = resolvent_difference(op("(add (pow xi1 2) 2)"), op("(add (pow xi1 2) 2)"), 3);
    for (const auto& t : same.terms()) CHECK(t.is_zero());
    // |λ|² decay at fixed ξ
    for (double L : {10.0, 100.0, 1e4}) CHECK(std::abs(eval_at(d4, 0, 1.0, -L)) * L * L < 1.01);
}

TEST_CASE("commutator terms") {
    const auto a = PolyhomSymbol::from_terms(Rational(0), 1, {expi(1)});
    const auto ap = PolyhomSymbol::from_terms(Rational(1), 1, {abs_xi()});
    const auto p = op("(add (pow xi1 2) 2 (cos 1 x1))").power(2);
    const auto r = commutator_resolvent_terms(a, ap, p, 2);
    CHECK(r.order() == Rational(-3));
    for (const auto& t : r.terms()) {
        for (const auto& c : t.certificates()) CHECK(c.nu >= 2);
        if (!t.is_zero()) CHECK(homogeneity_check(t.to_expression(), t.degree(), 1, 4).pass);
    }
    const auto commuting = commutator_resolvent_terms(PolyhomSymbol::constant(Expression(1), 1), ap,
                                                      op("(add (pow xi1 4) 1)"), 2);
    for (const auto& t : commuting.terms()) CHECK(t.is_zero());
    CHECK_THROWS_AS(commutator_resolvent_terms(a, ap, op("(add (pow xi1 2) 1)"), 2), UsageError);
}

TEST_CASE("parametrix identity") {
    const auto p = op("(add (pow xi1 2) 2 (cos 1 x1))");
    const auto q = resolvent_expansion(p, 4);
    const auto chk = parametrix_identity_check(p, q, 30);
    CHECK(chk.max_abs < 0.05);
    CHECK(chk.fitted_constant < 1e3);
}

TEST_CASE("integrability") {
    const auto q = resolvent_expansion(op("(add (pow xi1 2) 1)"), 2);
    const auto r = integrability_report(q.term(0), 1);
    CHECK(r.integrable);
    CHECK(r.min_r == Rational(0));
    const auto d = resolvent_difference(op("(add (pow xi1 2) 2)"), op("(add (pow xi1 2) 1)"), 2);
    const auto rd = integrability_report(d.term(2), 1);
    CHECK(rd.integrable);
    CHECK(std::fabs(rd.radial_slope) < 0.01);
    ParamTerm bad = ParamTerm::over({pow(xi, 2)}, Rational(-3), 2, 1);
    bad.add_piece({1}, pow(abs_xi(), -1));
    CHECK_FALSE(integrability_report(bad, 1).integrable);
}

TEST_CASE("ellipticity") {
    CHECK_THROWS_AS(resolvent_expansion(op("(mul -1 (pow xi1 2))"), 1), ConstructionError);
}
