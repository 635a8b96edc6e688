#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace qtrace::bdry {

using complex = std::complex<double>;

/// coeff / (ξ_n − pole)^power
struct PoleTerm {
    complex pole{};
    int power = 1;
    complex coeff{};
};

/// Finite partial-fraction sum in ξ_n.
struct PoleSum {
    std::vector<PoleTerm> terms;

    complex operator()(complex xi) const;
    bool empty() const { return terms.empty(); }
    /// u(x) = ∫ e^{i x ξ} r(ξ) đξ, đξ = dξ/2π. Upper half-plane poles feed x > 0,
    /// lower ones x < 0; at x = 0 the right limit of the plus part is used.
    complex kernel(double x) const;
};

/// Proper rational function of ξ_n: numerator (ascending coefficients) over Π (ξ_n − p)^mult.
struct HalfplaneRational {
    std::vector<complex> numerator;
    std::vector<std::pair<complex, int>> poles;

    complex operator()(complex xi) const;
    /// Brings a partial-fraction sum back over a common denominator.
    static HalfplaneRational from(const PoleSum& s);
};

/// r = plus + minus: plus carries the upper half-plane poles (kernels supported on
/// x_n > 0 under u(x) = ∫ e^{i x ξ} û đξ), minus the lower ones.
struct HalfplaneSplit {
    PoleSum plus;
    PoleSum minus;
};

/// Partial fractions by Taylor division at each pole. Real poles raise DomainError,
/// improper input raises UsageError.
HalfplaneSplit halfplane_split(const HalfplaneRational& r);

}  // namespace qtrace::bdry
