#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace qtrace::oracle {

using complex = std::complex<double>;

/// Members z^e for each exponent and log(z) z^e for each log exponent.
struct FitBasis {
    std::vector<double> exponents;
    std::vector<double> log_exponents;

    std::size_t size() const { return exponents.size() + log_exponents.size(); }
    std::string describe() const;
};

struct ExpansionFit {
    FitBasis basis;
    std::vector<complex> coeffs;      // aligned with basis.exponents
    std::vector<complex> log_coeffs;  // aligned with basis.log_exponents
    double residual = 0.0;            // weighted relative residual
    double condition = 0.0;           // of the column-scaled design matrix
    double stability = 0.0;           // target coefficient spread over sub-ranges
    double target_exponent = -1.0;
    double ray_angle = M_PI;
    double z_min = 0.0;
    double z_max = 0.0;
    int samples = 0;

    complex coefficient(double e) const;
    complex log_coefficient(double e) const;
    complex target() const { return coefficient(target_exponent); }
};

struct FitOptions {
    double max_condition = 1e13;
    double target_exponent = -1.0;
    /// Rows are weighted by |z|^{-weight_exponent} so every sample has comparable size.
    double weight_exponent = 0.0;
};

/// Least squares of values ≈ Σ c_e z^e + Σ c′_e log(z) z^e with column scaling,
/// z = −λ. Stability is the largest move of the target coefficient when refitting on
/// the lower and upper parts of the range. Fails on ill-conditioning.
ExpansionFit fit_expansion(const std::vector<complex>& z, const std::vector<complex>& values, const FitBasis& basis,
                           const FitOptions& opt = {});

/// Samples f on the ray over [mu_lo, mu_hi], fits, and sets the stability to the move
/// of the target coefficient when the whole range is shifted by a factor 2.
ExpansionFit fit_ray(const std::function<complex(complex)>& f, double ray_angle, double mu_lo, double mu_hi, int count,
                     const FitBasis& basis, const FitOptions& opt = {});

/// One row per sample: |z|, arg z, value, fitted value.
std::string fit_csv(const std::vector<complex>& z, const std::vector<complex>& values, const ExpansionFit& fit);

complex evaluate_fit(const ExpansionFit& fit, complex z);

/// Geometric grid of `count` magnitudes between lo and hi.
std::vector<double> geometric_grid(double lo, double hi, int count);

/// Samples f(λ) at λ = μ e^{iθ} over μ ∈ grid; returns (z = −λ, value) pairs.
void sample_ray(const std::function<complex(complex)>& f, double ray_angle, const std::vector<double>& mu,
                std::vector<complex>& z, std::vector<complex>& values);

}  // namespace qtrace::oracle
