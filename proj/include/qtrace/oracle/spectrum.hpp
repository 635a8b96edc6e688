#pragma once

#include "qtrace/boundary/cylinder.hpp"
#include "qtrace/oracle/fit.hpp"
#include "qtrace/oracle/matrix.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qtrace::oracle {

/// Spectrum as a sum of independent one-parameter families plus a shift
/// (eigenvalues shift + Σ_f λ_f), or an explicit list.
struct SpectrumSpec {
    std::vector<std::vector<std::pair<double, int>>> factors;  // (eigenvalue, multiplicity)
    std::vector<double> eigenvalues;                           // used when factors is empty
    double shift = 0.0;
    double zero_threshold = 1e-9;
    int dim = 1;
    int order = 2;
    bool boundary = false;  // heat exponents at every j, not only even j
    std::string description;

    double heat_trace(double t) const;
    int nullity() const;
    double smallest() const;

    /// −Δ + mass² on the flat torus of the given dimension, modes |k| ≤ K per axis.
    static SpectrumSpec torus_laplacian(int dim, double mass2, int K = 400);
    /// Eigenvalues of a Hermitian truncation.
    static SpectrumSpec from_matrix(const TruncatedOperator& p, int order);
};

/// (πj/L)² + k² + m² for j ≥ 1 and all integers k, on the circle of circumference 2π.
SpectrumSpec dirichlet_product_spectrum(const bdry::CylinderSpec& c, int cutoff = 400);

struct HeatFitOptions {
    double t_min = 0.005;
    double t_max = 0.15;
    int points = 40;
    int terms = 8;            // power members besides t⁰
    double drift_tol = 1e-3;  // allowed change of the t⁰ coefficient across sub-grids
};

struct ZetaAtZero {
    double zeta0 = 0.0;
    int nu0 = 0;
    double c0 = 0.0;  // t⁰ heat coefficient of the full trace
    double drift = 0.0;
    ExpansionFit fit;
};

/// t⁰ coefficient of Tr e^{−tP} fitted on a geometric t-grid against the
/// exponents (j − n)/m ∪ {0}; ζ(0) = C₀ − ν₀. Drift beyond tolerance raises OracleError.
ZetaAtZero zeta_at_zero(const SpectrumSpec& spec, const HeatFitOptions& opt = {});

}  // namespace qtrace::oracle
