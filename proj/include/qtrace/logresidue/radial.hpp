#pragma once

#include "qtrace/logresidue/transform.hpp"

#include <array>

namespace qtrace::logres {

struct RadialReport {
    complex lhs{};  // ∫_{ℝⁿ} f(ξ, −1) đξ
    complex rhs{};  // (1/m) ∫_{|ξ|=1} ∫_{-∞}^0 f(ξ, t) dt đS
    double diff = 0.0;
    int dim = 1;
    int m = 2;
    double radial_slope = 0.0;
};

/// Both sides of the quasi-homogeneous radial reduction for f of degree −m−n.
/// Refuses f whose radial slope near ξ = 0 is not above −n (non-integrable).
RadialReport radial_reduce(const Expression& f, int n, int m, const std::array<double, 2>& x = {0.0, 0.0},
                           int sphere_degree = 32);

}  // namespace qtrace::logres
