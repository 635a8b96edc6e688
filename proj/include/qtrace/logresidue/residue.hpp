#pragma once

#include "qtrace/logresidue/transform.hpp"
#include "qtrace/symexpr/sphere_rule.hpp"

#include <array>
#include <string>
#include <vector>

namespace qtrace::logres {

/// Flat torus or product domain: side lengths and the x-grid used for integration.
struct Domain {
    int dim = 1;
    std::array<double, 2> length{2 * M_PI, 2 * M_PI};
    std::array<int, 2> grid{32, 32};

    double volume() const;
    /// Trapezoid nodes and cell weights over the grid.
    std::vector<std::array<double, 2>> nodes() const;
    double cell() const;
};

struct ResidueSample {
    std::array<double, 2> x{};
    complex value{};  // ∫_{|ξ|=1} a_{−n}(x, ξ) đS(ξ)
};

struct ResidueValue {
    complex value{};
    bool term_present = false;
    Rational degree{0};
    int sphere_nodes = 0;
    double normalization = 0.0;  // (2π)^{-norm_dim} applied on the cosphere
    int norm_dim = 0;
    double x_volume = 0.0;
    std::vector<ResidueSample> samples;
};

/// ∫_X ∫_{|ξ|=1} a_{−n} đS dx. Exactly 0 when the symbol has no degree −n term.
/// norm_dim = 0 uses the domain dimension.
ResidueValue noncommutative_residue(const PolyhomSymbol& a, const Domain& domain, int sphere_degree = 32,
                                    int norm_dim = 0);

/// ∫_{|ξ|=1} e(x, ξ) đS at one x.
complex cosphere_integral(const sym::Program& e, const std::array<double, 2>& x, const sym::SphereRule& rule);

/// ∫_{ℝⁿ} f(x, ξ, −1) đξ by radial quadrature on each sphere node.
complex covariable_integral(const sym::Program& f, const std::array<double, 2>& x, const sym::SphereRule& rule,
                            double tol = num::kDefaultQuadTol);

struct DensitySample {
    std::array<double, 2> x{};
    complex value{};
};

struct C0Report {
    complex value{};
    bool term_present = false;
    int j_star = 0;
    Rational degree{0};
    std::vector<DensitySample> density;  // integration grid
};

/// C₀ density ∫ t^h(x, ξ, −1) đξ of term j* of `s`, integrated over the domain.
/// Zero by convention when j* is not an integer index. Non-integrable terms are refused.
C0Report c0_interior(const ParamSymbol& s, const Rational& j_star, const Domain& domain, int sphere_degree = 32);

/// Density of a single term at one x.
complex c0_density(const ParamTerm& term, const std::array<double, 2>& x, int sphere_degree = 32);

}  // namespace qtrace::logres
