#pragma once

#include "qtrace/oracle/matrix.hpp"

namespace qtrace::oracle {

/// Tr(A (P − λ)^{-1}) by a dense LU solve. A singular solve raises SpectralCollision
/// carrying the eigenvalue of P nearest to λ.
complex resolvent_trace(const TruncatedOperator& a, const TruncatedOperator& p, complex lambda);

/// Tr(A (P − λ)^{-N}).
complex resolvent_power_trace(const TruncatedOperator& a, const TruncatedOperator& p, complex lambda, int power);

/// Tr(A (Q₁ − Q₂)) through the resolvent identity Q₁ − Q₂ = Q₁ (P₂ − P₁) Q₂,
/// evaluated cyclically as Tr(W Z), W = Q₂A, Z = Q₁(P₂ − P₁).
complex difference_trace(const TruncatedOperator& a, const TruncatedOperator& p1, const TruncatedOperator& p2,
                         complex lambda);

/// Value at cutoff K and the change against a second cutoff K′ > K.
struct TraceEstimate {
    complex value{};
    complex reference{};
    double truncation = 0.0;
    int K = 0;
    int K_ref = 0;
};

/// Builds the matrices from symbols at both cutoffs and evaluates the trace family
/// `kind`: "resolvent" Tr(A Q), "difference" Tr(A(Q₁ − Q₂)), "commutator" Tr([A, A′] Q).
struct TraceProblem {
    std::string kind = "resolvent";
    int dim = 1;
    Expression a{1};
    Expression a_prime{0};
    Expression p;
    Expression p2;
    int power = 1;

    /// Prebuilds matrices for one cutoff.
    struct Assembled {
        TruncatedOperator a, p, p2;
    };
    Assembled assemble(int K) const;
    complex evaluate(const Assembled& m, complex lambda) const;
};

TraceEstimate trace_with_estimate(const TraceProblem& prob, complex lambda, int K, int K_ref);

/// Σ_k a(k)/(p(k) − λ)^N on T¹ for x-independent symbols: the modes |k| ≤ K summed
/// directly, the two tails by Euler–Maclaurin from k = K + ½.
complex lattice_trace(const Expression& a, const Expression& p, complex lambda, int K, int power = 1);

/// Σ_{k ∈ ℤ} f(k, λ) for a summand in ξ₁ and λ smooth away from ξ₁ = 0, with the
/// Euler–Maclaurin tails beyond |k| = K. `skip_zero` drops the k = 0 mode.
complex lattice_sum(const Expression& summand, complex lambda, int K, bool skip_zero = false);

/// Largest relative gap between Tr(A(P−λ)^{-N}) and the Taylor coefficient
/// (1/(N−1)!) ∂_λ^{N−1} Tr(A(P−λ)^{-1}), the latter by a trapezoidal Cauchy integral
/// on a circle inside the resolvent set.
double power_trace_consistency(const TruncatedOperator& a, const TruncatedOperator& p, complex lambda, int power);

}  // namespace qtrace::oracle
