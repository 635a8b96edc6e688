#pragma once

#include "qtrace/symexpr/expression.hpp"
#include "qtrace/symexpr/scalar_field.hpp"

#include <array>
#include <map>
#include <string>

namespace qtrace::param {

using sym::Expression;
using sym::ScalarField;
using MultiIndex = std::array<int, 2>;

/// P = Σ_α c_α(x) D^α with D = −i∂ on T^n; symbol Σ_α c_α(x) ξ^α.
class DifferentialOperator {
public:
    explicit DifferentialOperator(int dim = 1) : dim_(dim) {}

    /// Reads a polynomial-in-ξ symbol with trigonometric coefficients.
    static DifferentialOperator from_symbol(const Expression& symbol, int dim, int max_x_degree = 12);

    int dim() const { return dim_; }
    int order() const;
    const std::map<MultiIndex, ScalarField>& coefficients() const { return coeffs_; }
    void set(const MultiIndex& alpha, const ScalarField& c);

    /// Homogeneous part of the symbol of the given ξ-degree.
    Expression symbol_part(int degree) const;
    Expression principal() const { return symbol_part(order()); }
    Expression full_symbol() const;

    DifferentialOperator compose(const DifferentialOperator& o) const;
    DifferentialOperator power(int k) const;
    DifferentialOperator operator+(const DifferentialOperator& o) const;
    DifferentialOperator operator-(const DifferentialOperator& o) const;

    bool is_constant_coefficient() const;
    /// Largest coefficient frequency along an axis.
    int x_bandwidth(int axis) const;

private:
    int dim_;
    std::map<MultiIndex, ScalarField> coeffs_;
};

struct EllipticityReport {
    bool pass = false;
    double min_abs_principal = 0.0;
    double min_distance_to_cut_angle = 0.0;  // min |π − arg p_m| over samples
    std::string witness;
};

/// Samples p_m on an x-grid times the unit cosphere. Fails when |p_m| vanishes
/// or p_m enters the closed sector |arg λ − π| ≤ sector_half_angle.
EllipticityReport check_ellipticity(const DifferentialOperator& p, double sector_half_angle, int x_samples = 16);

/// Throws ConstructionError with the witness if the check fails.
void require_elliptic(const DifferentialOperator& p, double sector_half_angle);

}  // namespace qtrace::param
