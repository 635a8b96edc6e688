#pragma once

#include "qtrace/logresidue/transform.hpp"
#include "qtrace/parametrix/calculus.hpp"

namespace qtrace::logres {

using param::DifferentialOperator;

/// symb(log P) = m log|ξ| + b with b classical of order 0.
struct LogSymbol {
    int m = 0;
    int dim = 1;
    PolyhomSymbol b;

    /// m log|ξ| + Σ_j b_{−j}, the first `terms` classical terms.
    Expression expression(int terms) const;
};

/// b₀ = log p_m − m log|ξ| in closed form (principal branch), b_{−j} = T[q_{−m−j}].
LogSymbol log_symbol(const DifferentialOperator& p, int depth);

/// l = b(P₁) − b(P₂) computed as l_{−j} = T[𝔮_{−m−j}].
PolyhomSymbol log_difference_symbol(const DifferentialOperator& p1, const DifferentialOperator& p2, int depth);

/// h_{σ+σ′−j} = T[r_{σ+σ′−m−j}] for the symbol of A Q_λ [P, A′] Q_λ.
PolyhomSymbol log_commutator_symbol(const PolyhomSymbol& a, const PolyhomSymbol& a_prime, const DifferentialOperator& p,
                                    int depth);

}  // namespace qtrace::logres
