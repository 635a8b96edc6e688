#include "doctest.h"

#include "qtrace/errors.hpp"
#include "qtrace/symexpr/evaluate.hpp"
#include "qtrace/symexpr/homogeneity.hpp"
#include "qtrace/symexpr/scalar_field.hpp"
#include "qtrace/symexpr/series.hpp"
#include "qtrace/symexpr/sphere_rule.hpp"

#include <cmath>
#include <random>

using namespace qtrace;
using namespace qtrace::sym;

namespace {

const Expression xi = Expression::variable(Var::Xi1);
const Expression xi2 = Expression::variable(Var::Xi2);
const Expression lam = Expression::variable(Var::Lambda);
const Expression x = Expression::variable(Var::X1);

Point at(double x1, double k, complex l) {
    Point p;
    p.set(Var::X1, x1).set(Var::Xi1, k).set(Var::Lambda, l);
    return p;
}

}  // namespace

TEST_CASE("evaluate examples") {
    CHECK(evaluate(pow(xi, 2) - lam, at(0, 2, -1)) == complex(5, 0));
    Point p;
    p.set(Var::Xi1, 3).set(Var::Xi2, 4);
    CHECK(std::abs(evaluate(pow(abs_xi(), -1), p) - 0.2) < 1e-15);
    CHECK(std::abs(evaluate(expi(1) * (xi + 1), at(0, 1, 0)) - 2.0) < 1e-15);
}

TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(evaluate(pow(xi, -1), at(0, 0, 0)), DomainError);
    Point p;
    p.set(Var::Xi1, 1.0);
    CHECK_THROWS_AS(evaluate(xi + lam, p), UsageError);
}

TEST_CASE("differentiate examples") {
    const Expression e = pow(pow(xi, 2) - lam, -1);
    const Expression d = differentiate(e, Var::Xi1);
    const Expression want = Expression(-2) * xi * pow(pow(xi, 2) - lam, -2);
    for (double k : {0.3, 1.0, 2.5}) CHECK(std::abs(evaluate(d, at(0, k, -1.5)) - evaluate(want, at(0, k, -1.5))) < 1e-14);
    CHECK(structurally_equal(d, want));
    Point p;
    p.set(Var::Xi1, 1).set(Var::Xi2, 0);
    CHECK(evaluate(differentiate(abs_xi(), Var::Xi1), p) == complex(1, 0));
    const Expression v = Expression(2) + cos_x(1, Var::X1);
    CHECK(std::abs(evaluate(differentiate(v, Var::X1), at(0.7, 0, 0)) + std::sin(0.7)) < 1e-15);
}

TEST_CASE("normalization collects like terms and bases") {
    CHECK((xi - xi).is_zero());
    CHECK(structurally_equal(xi * xi, pow(xi, 2)));
    CHECK(structurally_equal(rpow(xi + 1, Rational(1, 2)) * rpow(xi + 1, Rational(1, 2)), xi + 1));
    CHECK((expi(1) * expi(-1)).is_one());
    CHECK(structurally_equal(Expression(3) * xi + Expression(2) * xi, Expression(5) * xi));
}

TEST_CASE("random expressions: symbolic derivative matches finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(0, 7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::function<Expression(int)> gen = [&](int depth) -> Expression {
        if (depth == 0) {
            switch (pick(rng) % 5) {
                case 0: return xi;
                case 1: return x;
                case 2: return Expression(1.0 + unit(rng));
                case 3: return abs_xi();
                default: return lam;
            }
        }
        switch (pick(rng)) {
            case 0: return gen(depth - 1) + gen(depth - 1);
            case 1: return gen(depth - 1) * gen(depth - 1);
            case 2: return pow(pow(gen(depth - 1), 2) + Expression(1.5), -1);
            case 3: return rpow(pow(gen(depth - 1), 2) + Expression(2), Rational(1, 3));
            case 4: return expi(1) * gen(depth - 1);
            case 5: return cos_x(2, Var::X1) + gen(depth - 1);
            case 6: return pow(gen(depth - 1), 3);
            default: return Expression(0.5) - gen(depth - 1);
        }
    };
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const Expression e = gen(3);
        for (Var v : {Var::Xi1, Var::X1}) {
            const Point p = at(0.4 + unit(rng), 0.5 + unit(rng), complex(-0.5 - unit(rng), 0.2));
            const complex sym_d = evaluate(differentiate(e, v), p);
            const double h = 1e-5;
            Point pp = p, pm = p;
            pp.set(v, p.get(v) + h);
            pm.set(v, p.get(v) - h);
            const complex fd = (evaluate(e, pp) - evaluate(e, pm)) / (2 * h);
            CHECK(std::abs(sym_d - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
            ++checked;
        }
    }
    CHECK(checked == 200);
}

TEST_CASE("deterministic evaluation") {
    const Expression e = rpow(pow(xi, 2) + pow(xi2, 2) + Expression(1) - lam, Rational(-3, 2)) * cos_x(3, Var::X1);
    Point p;
    p.set(Var::X1, 0.3).set(Var::Xi1, 0.7).set(Var::Xi2, -1.1).set(Var::Lambda, complex(-2, 0.5));
    const complex a = evaluate(e, p);
    for (int i = 0; i < 5; ++i) CHECK(evaluate(e, p) == a);
}

TEST_CASE("homogeneity check") {
    CHECK(homogeneity_check(pow(pow(xi, 2) - lam, -1), Rational(-2), 1, 2).pass);
    const Expression vprime = differentiate(Expression(2) + cos_x(1, Var::X1), Var::X1);
    const Expression t = Expression(complex(0, -2)) * xi * vprime * pow(pow(xi, 2) - lam, -3);
    CHECK(homogeneity_check(t, Rational(-5), 1, 2).pass);
    const auto bad = homogeneity_check(pow(xi, 2) + 1, Rational(2), 1, 2);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_rel_deviation > 1e-3);
}

TEST_CASE("sphere rules") {
    const auto s1 = sphere_quadrature(1, 1);
    REQUIRE(s1.nodes.size() == 2);
    CHECK(s1.weights[0] == doctest::Approx(1.0 / (2 * M_PI)));
    const auto s2 = sphere_quadrature(2, 16);
    CHECK(s2.total_weight() == doctest::Approx(1.0 / (2 * M_PI)).epsilon(1e-14));
    double acc = 0.0;
    for (std::size_t i = 0; i < s2.nodes.size(); ++i) acc += s2.weights[i] * s2.nodes[i][0] * s2.nodes[i][0];
    CHECK(acc == doctest::Approx(1.0 / (4 * M_PI)).epsilon(1e-14));
    // Exact for every trigonometric monomial up to the configured degree.
    for (int d = 1; d <= 16; ++d) {
        double c = 0.0;
        for (std::size_t i = 0; i < s2.nodes.size(); ++i) c += s2.weights[i] * std::cos(d * std::atan2(s2.nodes[i][1], s2.nodes[i][0]));
        CHECK(std::fabs(c) < 1e-15);
    }
    CHECK_THROWS_AS(sphere_quadrature(3, 4), UsageError);
}

TEST_CASE("scalar field round trip") {
    const Expression v = Expression(2) + cos_x(1, Var::X1);
    const auto f = ScalarField::from_expression(v, 1);
    CHECK(f.coefficient({0, 0}) == complex(2, 0));
    CHECK(f.coefficient({1, 0}) == complex(0.5, 0));
    CHECK(f.is_real());
    CHECK(std::abs(f.derivative(0)(0.4) + std::sin(0.4)) < 1e-15);
    CHECK_THROWS_AS(ScalarField::from_expression(pow(Expression(2) + cos_x(1, Var::X1), -1), 1, 6), UsageError);
}

TEST_CASE("prefix text round trip") {
    const Expression e = parse_prefix("(add (pow xi1 2) (mul -1 lam) (cos 1 x1) 1/3)");
    const Expression again = parse_prefix(to_prefix(e));
    CHECK(structurally_equal(e, again));
    const std::string once = to_prefix(parse_prefix("(rpow (add xi1 2) 1/2)"));
    CHECK(to_prefix(parse_prefix(once)) == once);
    CHECK_THROWS_AS(parse_prefix("(add xi1"), UsageError);
    CHECK_THROWS_AS(parse_prefix("(frob 1)"), UsageError);
}

TEST_CASE("homogeneous expansion of a shifted resolvent") {
    const Expression e = pow(pow(xi, 2) + Expression(2) - lam, -1);
    const auto parts = homogeneous_expansion(e, 2, Rational(4));
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].degree == Rational(-2));
    CHECK(parts[1].degree == Rational(-4));
    const complex v = evaluate(parts[1].term, at(0, 1.3, -0.7));
    CHECK(std::abs(v + 2.0 / std::pow(1.69 + 0.7, 2)) < 1e-14);
}
