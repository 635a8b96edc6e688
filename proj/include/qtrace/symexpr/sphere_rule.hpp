#pragma once

#include <array>
#include <vector>

namespace qtrace::sym {

/// Quadrature on S^{n-1} carrying the measure đS = (2π)^{-norm_dim} dS.
struct SphereRule {
    int dim = 1;
    int norm_dim = 1;
    std::vector<std::array<double, 2>> nodes;
    std::vector<double> weights;
    double normalization = 0.0;  // (2π)^{-norm_dim}

    double total_weight() const;
};

/// n = 1: the two points ±1. n = 2: equispaced trapezoid exact for trigonometric
/// polynomials of degree ≤ `degree`. norm_dim defaults to n.
SphereRule sphere_quadrature(int n, int degree, int norm_dim = 0);

}  // namespace qtrace::sym
