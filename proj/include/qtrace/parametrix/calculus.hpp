#pragma once

#include "qtrace/parametrix/symbol.hpp"

namespace qtrace::param {

/// Leibniz product Σ (1/α!) ∂_ξ^α a · D_x^α b, D = −i∂, through depth J.
ParamSymbol compose(const ParamSymbol& a, const ParamSymbol& b, int depth);
PolyhomSymbol compose(const PolyhomSymbol& a, const PolyhomSymbol& b, int depth);

/// Same rule with λ as a constant; certificates merge (resolvent counts add).
ParamSymbol compose_param(const PolyhomSymbol& a, const ParamSymbol& q, int depth);

/// Symbol of (P − λ)^{-1}: q_{−m} = (p_m − λ)^{-1} and the recursion for j ≥ 1.
ParamSymbol resolvent_expansion(const DifferentialOperator& p, int depth, double sector_half_angle = 0.7853981633974483);

/// Symbol of P − λ as a complete parametrized symbol.
ParamSymbol operator_minus_lambda(const DifferentialOperator& p);

/// 𝔮_{−m−j} = q_{1,−m−j} − q_{2,−m−j}; the leading difference uses
/// (p₂ − p₁)(p₁ − λ)^{-1}(p₂ − λ)^{-1}.
ParamSymbol resolvent_difference(const DifferentialOperator& p1, const DifferentialOperator& p2, int depth);

/// Symbol of A Q_λ [P, A′] Q_λ through depth J. Requires m > n + σ + σ′.
ParamSymbol commutator_resolvent_terms(const PolyhomSymbol& a, const PolyhomSymbol& a_prime,
                                       const DifferentialOperator& p, int depth);

struct IntegrabilityReport {
    bool integrable = true;      // structural: min r > −n
    Rational min_r{0};
    int dim = 1;
    double radial_slope = 0.0;   // d log|f| / d log|ξ| near 0 at λ = −1
    bool numeric_agrees = true;
};

IntegrabilityReport integrability_report(const ParamTerm& term, int dim);

struct ParametrixCheck {
    double max_abs = 0.0;       // |compose(p − λ, q) − 1| over samples
    double fitted_constant = 0.0;
    int samples = 0;
};

/// Evaluates compose_param(p − λ, q) − 1 at random (x, ξ, λ = −|λ|) points and fits
/// max |residual| ⟨ξ⟩^{J+1}.
ParametrixCheck parametrix_identity_check(const DifferentialOperator& p, const ParamSymbol& q, int samples = 50);

}  // namespace qtrace::param
