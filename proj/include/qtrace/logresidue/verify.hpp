#pragma once

#include "qtrace/logresidue/log_symbol.hpp"
#include "qtrace/logresidue/residue.hpp"
#include "qtrace/report.hpp"

#include <vector>

namespace qtrace::logres {

struct VerifyOptions {
    int grid = 8;               // pointwise comparison points per circle factor
    int integration_grid = 32;  // trapezoid points per circle factor
    int sphere_degree = 32;
    int extra_depth = 0;        // terms beyond the minimal index j*
    double tol_pointwise = 1e-8;
    double tol_integrated = 1e-8;
    /// Directions (angles on S¹; the sign of cos picks ±1 on S⁰) for the per-ray check.
    std::vector<double> ray_angles;
};

/// C₀(P) = −(1/m) res(log P), pointwise and integrated.
IdentityReport verify_t14(const DifferentialOperator& p, const VerifyOptions& opt = {});

/// C₀(A, P₁) − C₀(A, P₂) = −(1/m) res(A(log P₁ − log P₂)). Needs m > n + σ.
IdentityReport verify_t22(const PolyhomSymbol& a, const DifferentialOperator& p1, const DifferentialOperator& p2,
                          const VerifyOptions& opt = {});

/// C₀([A, A′], P) = −(1/m) res(A[A′, log P]). Needs m > n + σ + σ′.
IdentityReport verify_t23(const PolyhomSymbol& a, const PolyhomSymbol& a_prime, const DifferentialOperator& p,
                          const VerifyOptions& opt = {});

}  // namespace qtrace::logres
