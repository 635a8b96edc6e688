#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qtrace::num {

using complex = std::complex<double>;
using ComplexFn = std::function<complex(double)>;

struct QuadResult {
    complex value{};
    double error = 0.0;
};

inline constexpr double kDefaultQuadTol = 1e-11;

/// ∫_a^b f by adaptive Gauss–Kronrod (15 points).
QuadResult integrate_interval(const ComplexFn& f, double a, double b, double tol = kDefaultQuadTol);

/// ∫_{-∞}^0 f(t) dt through t = −(u/(1−u))², u ∈ [0, 1).
QuadResult integrate_negative_axis(const ComplexFn& f, double tol = kDefaultQuadTol);

/// ∫_0^∞ f(r) dr through r = u/(1−u).
QuadResult integrate_half_line(const ComplexFn& f, double tol = kDefaultQuadTol);

/// ∫_a^∞ f(r) dr through r = a + u/(1−u).
QuadResult integrate_tail(const ComplexFn& f, double a, double tol = kDefaultQuadTol);

/// ∫_a^∞ f for algebraically decaying f: fixed Gauss–Legendre on panels [a 2^i, a 2^{i+1}]
/// until the panel sums fall below tol relative, then a geometric remainder. Needs a > 0.
/// Unlike integrate_tail it tolerates cancellation noise in f far out.
QuadResult integrate_power_tail(const ComplexFn& f, double a, double tol = 1e-15);

/// Gauss–Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace qtrace::num
