#pragma once

#include "qtrace/symexpr/evaluate.hpp"

#include <string>
#include <vector>

namespace qtrace::bdry {

using sym::Expression;
using sym::Point;

/// coeff · x^a y^b e^{−αx − βy} on the quarter plane x, y > 0. Coefficients and
/// rates are expressions in the tangential covariable ξ′ (Var::Xi1) and λ.
struct SGTerm {
    Expression coeff;
    int a = 0;
    int b = 0;
    Expression alpha;
    Expression beta;
};

/// Singular Green kernel g̃(x_n, y_n) of exponential-polynomial class.
struct SGKernel {
    std::vector<SGTerm> terms;

    bool empty() const { return terms.empty(); }
    std::complex<double> operator()(double x, double y, const Point& at) const;
    SGKernel operator+(const SGKernel& o) const;
    SGKernel scaled(const Expression& c) const;
};

/// Σ coeff · e^{−rate |x − y|}, a full-line convolution kernel restricted to the half-line.
struct ToeplitzTerm {
    Expression coeff;
    Expression rate;
};

struct ToeplitzKernel {
    std::vector<ToeplitzTerm> terms;

    std::complex<double> operator()(double x, double y, const Point& at) const;
    /// Value on the diagonal x = y.
    Expression diagonal() const;
    ToeplitzKernel operator-(const ToeplitzKernel& o) const;
};

/// σ = (ξ′² + m² − λ)^{1/2}, principal branch.
Expression dirichlet_sigma(double mass2);
/// Kernel e^{−σ|x−y|}/(2σ) of (−∂² + σ²)^{-1} on the line.
ToeplitzKernel full_line_resolvent(const Expression& sigma);
/// s.g.o. part of the Dirichlet resolvent of −∂_{x_n}² + ξ′² + m² − λ on x_n > 0:
/// g̃ = −e^{−σ(x+y)}/(2σ), so that (full-line kernel + g̃)(0, y) = 0.
SGKernel dirichlet_resolvent_sgo(double mass2);

/// Witness points (ξ′, λ) where decay of every rate is checked.
std::vector<Point> default_witnesses();

/// s(ξ′, λ) = ∫₀^∞ g̃(x, x) dx = Σ c (a+b)! / (α+β)^{a+b+1}. A term with
/// Re(α + β) ≤ 0 at a witness raises DomainError.
Expression normal_trace(const SGKernel& g, const std::vector<Point>& witnesses = default_witnesses());

/// ∫₀^∞ g̃(x, z) k(z, y) dz in closed form.
SGKernel sgo_compose(const SGKernel& g, const ToeplitzKernel& k,
                     const std::vector<Point>& witnesses = default_witnesses());
/// tr_n(G K) = ∫∫ g̃(x, y) k(y, x) dy dx evaluated directly. Every term is a product of
/// positive powers of 1/(α+β), 1/(α+s), 1/(β+s), so it stays accurate where the
/// composed kernel's 1/(β − s) factors cancel (|ξ′| large against |λ|).
Expression composed_trace(const SGKernel& g, const ToeplitzKernel& k,
                          const std::vector<Point>& witnesses = default_witnesses());

/// ∫₀^∞ g̃(x, z) h̃(z, y) dz in closed form.
SGKernel sgo_compose(const SGKernel& g, const SGKernel& h, const std::vector<Point>& witnesses = default_witnesses());

}  // namespace qtrace::bdry
