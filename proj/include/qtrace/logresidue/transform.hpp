#pragma once

#include "qtrace/numeric/quadrature.hpp"
#include "qtrace/parametrix/symbol.hpp"
#include "qtrace/symexpr/evaluate.hpp"

namespace qtrace::logres {

using param::ParamSymbol;
using param::ParamTerm;
using param::PolyhomSymbol;
using sym::complex;
using sym::Expression;
using sym::Point;
using sym::Rational;

/// ∫_{-∞}^0 f(t) dt with λ = t, other variables taken from `at`.
num::QuadResult line_integral(const sym::Program& f, const Point& at, double tol = num::kDefaultQuadTol);

/// Empirical decay exponent of |f(−L)| along the negative axis, from L = 1e4 and 1e6.
/// Identically vanishing samples give −∞.
double decay_exponent(const sym::Program& f, const Point& at);

/// T[f] = (i/2π)∮ log λ f dλ = −∫_{-∞}^0 f(t) dt as an expression in the remaining
/// variables. Needs f = O(λ^{-1-ε}); the probe runs at `probe` and refuses otherwise.
Expression log_transform(const Expression& f, const Point& probe);

/// Termwise T in closed form: one resolvent base with exponent e ≥ 2 gives
/// −g p^{1−e}/(e−1); two bases with exponents (1, 1) give g(log a − log b)/(b − a);
/// anything else becomes a numeric λ-integral node. Pieces with ν < 2 are refused.
Expression log_transform(const ParamTerm& term);

/// Applies log_transform to every term of `q`; the result has order q.order() + m.
PolyhomSymbol log_transform_terms(const ParamSymbol& q);

/// Boundary of {r ≤ |λ| ≤ R, |arg λ| ≤ π − θ}, counterclockwise. It stays off the
/// closed negative axis and encloses every pole with r < |λ| < R off the sector.
struct KeyholeContour {
    double inner_radius = 0.25;
    double half_angle = 0.3;
    double outer_radius = 100.0;
    double quad_tol = 1e-13;
};

struct ContourCheck {
    complex contour_value{};    // (1/2πi)∮ log λ f dλ
    complex line_value{};       // ∫_{-∞}^0 f(t) dt
    complex transform_value{};  // T[f] = −line_value
    double abs_diff = 0.0;
    double contour_error = 0.0;
    double line_error = 0.0;
    double tol = 1e-8;
    bool pass = false;
};

/// Both sides of the keyhole identity at the point `at`. A pole on the contour
/// (non-finite or blown-up integrand) raises ContourError.
ContourCheck contour_check(const Expression& f, const KeyholeContour& contour, const Point& at = {}, double tol = 1e-8);

/// (1/2πi)∮ log λ f dλ over the contour, counterclockwise.
complex contour_log_integral(const sym::Program& f, const KeyholeContour& contour, const Point& at, double* error = nullptr);

}  // namespace qtrace::logres
