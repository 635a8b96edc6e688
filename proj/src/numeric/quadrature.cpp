#include "qtrace/numeric/quadrature.hpp"

#include "qtrace/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <cmath>

namespace qtrace::num {

namespace {

constexpr unsigned kMaxDepth = 18;

}  // namespace

QuadResult integrate_interval(const ComplexFn& f, double a, double b, double tol) {
    QuadResult out;
    out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, tol, &out.error);
    return out;
}

QuadResult integrate_negative_axis(const ComplexFn& f, double tol) {
    // t = −s² with s = u/(1−u): decay |t|^{-1-ε} leaves (1−u)^{2ε−1} at u = 1,
    // bounded for ε ≥ 1/2, where t = −u/(1−u) alone would leave (1−u)^{ε−1}.
    auto g = [&](double u) -> complex {
        const double w = 1.0 - u;
        const double s = u / w;
        return f(-s * s) * (2.0 * s) / (w * w);
    };
    return integrate_interval(g, 0.0, 1.0, tol);
}

QuadResult integrate_half_line(const ComplexFn& f, double tol) { return integrate_tail(f, 0.0, tol); }

QuadResult integrate_tail(const ComplexFn& f, double a, double tol) {
    auto g = [&](double u) -> complex {
        const double w = 1.0 - u;
        return f(a + u / w) / (w * w);
    };
    return integrate_interval(g, 0.0, 1.0, tol);
}

QuadResult integrate_power_tail(const ComplexFn& f, double a, double tol) {
    if (!(a > 0.0)) throw UsageError("power tail needs a positive start");
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> r;
        gauss_legendre(20, r.first, r.second);
        return r;
    }();
    QuadResult out;
    complex prev = 0;
    double lo = a;
    for (int i = 0; i < 200; ++i) {
        const double hi = 2 * lo;
        complex panel = 0;
        for (std::size_t k = 0; k < rule.first.size(); ++k)
            panel += rule.second[k] * f(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.first[k]);
        panel *= 0.5 * (hi - lo);
        out.value += panel;
        lo = hi;
        if (i > 2 && std::abs(panel) <= tol * std::abs(out.value)) {
            const double q = std::abs(prev) > 0.0 ? std::abs(panel) / std::abs(prev) : 0.0;
            if (q < 0.9) {
                out.value += panel * (q / (1.0 - q));
                out.error = std::abs(panel) * q / (1.0 - q);
                return out;
            }
        }
        prev = panel;
    }
    out.error = std::abs(prev);
    return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw UsageError("Gauss-Legendre rule needs at least one node");
    nodes = boost::math::legendre_p_zeros<double>(n);
    // Boost returns the non-negative zeros only.
    std::vector<double> full;
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
        if (*it != 0.0) full.push_back(-*it);
    for (double z : nodes) full.push_back(z);
    nodes = full;
    weights.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        const double dp = boost::math::legendre_p_prime<double>(n, x);
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace qtrace::num
