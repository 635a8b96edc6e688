#pragma once

#include "qtrace/symexpr/expression.hpp"

#include <array>
#include <map>

namespace qtrace::sym {

/// Finite trigonometric polynomial Σ c_k e^{i k·x} on T^n, n ∈ {1, 2}.
class ScalarField {
public:
    using Freq = std::array<int, 2>;

    explicit ScalarField(int dim = 1) : dim_(dim) {}
    static ScalarField constant(int dim, complex c);
    /// Samples an x-only expression and recovers its Fourier coefficients;
    /// refuses if the reconstruction misses (not a trig polynomial of that degree).
    static ScalarField from_expression(const Expression& e, int dim, int max_degree = 12);

    int dim() const { return dim_; }
    const std::map<Freq, complex>& coefficients() const { return coeffs_; }
    complex coefficient(const Freq& k) const;
    void set(const Freq& k, complex c);

    complex operator()(double x1, double x2 = 0.0) const;
    Expression to_expression() const;

    ScalarField derivative(int axis) const;
    ScalarField operator+(const ScalarField& o) const;
    ScalarField operator-(const ScalarField& o) const;
    ScalarField operator*(const ScalarField& o) const;
    ScalarField scaled(complex c) const;

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const;
    /// Hermitian symmetry c_{-k} = conj(c_k).
    bool is_real(double tol = 1e-13) const;
    /// Largest |k_axis| present.
    int degree(int axis) const;

private:
    int dim_;
    std::map<Freq, complex> coeffs_;
};

}  // namespace qtrace::sym
