#pragma once

#include "qtrace/symexpr/expression.hpp"

#include <cstdint>
#include <string>

namespace qtrace::sym {

struct HomogeneityReport {
    bool pass = false;
    double max_rel_deviation = 0.0;
    double tol = 0.0;
    int samples = 0;
    std::string worst_point;
};

/// Checks e(tξ, t^m λ) = t^degree e(ξ, λ) at random x, ξ ≠ 0, λ in the sector
/// around ℝ₋, t ∈ [0.5, 4]. m = 0 means λ is not scaled.
HomogeneityReport homogeneity_check(const Expression& e, const Rational& degree, int dim, int m, int samples = 24,
                                    double tol = 1e-10, std::uint64_t seed = 0x5eed);

}  // namespace qtrace::sym
