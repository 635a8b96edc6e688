#include "qtrace/oracle/spectrum.hpp"

#include "qtrace/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qtrace::oracle {

double SpectrumSpec::heat_trace(double t) const {
    if (factors.empty()) {
        double s = 0.0;
        for (double l : eigenvalues) s += std::exp(-t * l);
        return s;
    }
    double prod = std::exp(-t * shift);
    for (const auto& f : factors) {
        double s = 0.0;
        for (const auto& [l, mult] : f) s += mult * std::exp(-t * l);
        prod *= s;
    }
    return prod;
}

int SpectrumSpec::nullity() const {
    if (factors.empty())
        return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                              [&](double l) { return std::abs(l) < zero_threshold; }));
    if (std::abs(shift) >= zero_threshold) return 0;
    int n = 1;
    for (const auto& f : factors) {
        int zeros = 0;
        for (const auto& [l, mult] : f)
            if (std::abs(l) < zero_threshold) zeros += mult;
        n *= zeros;
    }
    return n;
}

double SpectrumSpec::smallest() const {
    if (factors.empty()) {
        return eigenvalues.empty() ? std::numeric_limits<double>::infinity()
                                   : *std::min_element(eigenvalues.begin(), eigenvalues.end());
    }
    double s = shift;
    for (const auto& f : factors) {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& [l, mult] : f) lo = std::min(lo, l);
        s += lo;
    }
    return s;
}

SpectrumSpec SpectrumSpec::torus_laplacian(int dim, double mass2, int K) {
    if (dim < 1 || dim > 2) throw UsageError("torus dimension must be 1 or 2");
    SpectrumSpec s;
    std::vector<std::pair<double, int>> axis;
    axis.emplace_back(0.0, 1);
    for (int k = 1; k <= K; ++k) axis.emplace_back(double(k) * k, 2);
    s.factors.assign(static_cast<std::size_t>(dim), axis);
    s.shift = mass2;
    s.dim = dim;
    s.order = 2;
    std::ostringstream os;
    os << "-Laplacian + " << mass2 << " on T^" << dim;
    s.description = os.str();
    return s;
}

SpectrumSpec SpectrumSpec::from_matrix(const TruncatedOperator& p, int order) {
    const double asym = (p.matrix - p.matrix.adjoint()).norm();
    if (asym > 1e-10 * std::max(1.0, p.matrix.norm()))
        throw UsageError("heat-trace oracle needs a self-adjoint operator");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p.matrix, Eigen::EigenvaluesOnly);
    SpectrumSpec s;
    s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    s.dim = p.dim;
    s.order = order;
    s.description = p.description;
    return s;
}

SpectrumSpec dirichlet_product_spectrum(const bdry::CylinderSpec& c, int cutoff) {
    c.validate();
    SpectrumSpec s;
    std::vector<std::pair<double, int>> normal, circle;
    for (int j = 1; j <= cutoff; ++j) {
        const double v = M_PI * j / c.length;
        normal.emplace_back(v * v, 1);
    }
    circle.emplace_back(0.0, 1);
    for (int k = 1; k <= cutoff; ++k) {
        const double v = 2 * M_PI * k / c.circumference;
        circle.emplace_back(v * v, 2);
    }
    s.factors = {normal, circle};
    s.shift = c.mass2;
    s.dim = 2;
    s.order = 2;
    s.boundary = true;
    std::ostringstream os;
    os << "Dirichlet -d_t^2 - d_theta^2 + " << c.mass2 << " on S^1(" << c.circumference << ") x [0, " << c.length
       << "]";
    s.description = os.str();
    return s;
}

ZetaAtZero zeta_at_zero(const SpectrumSpec& spec, const HeatFitOptions& opt) {
    if (spec.order < 1 || spec.dim < 1) throw UsageError("spectrum needs positive order and dimension");
    if (spec.smallest() < -spec.zero_threshold) throw UsageError("heat-trace oracle needs a nonnegative spectrum");

    FitBasis basis;
    basis.exponents.push_back(0.0);
    for (int j = 0; static_cast<int>(basis.exponents.size()) < opt.terms + 1; ++j) {
        if (!spec.boundary && j % 2 == 1) continue;
        const double e = double(j - spec.dim) / spec.order;
        if (e != 0.0) basis.exponents.push_back(e);
    }

    const auto ts = geometric_grid(opt.t_min, opt.t_max, opt.points);
    std::vector<complex> z, v;
    for (double t : ts) {
        z.emplace_back(t);
        v.emplace_back(spec.heat_trace(t));
    }
    FitOptions fo;
    fo.target_exponent = 0.0;
    fo.weight_exponent = -double(spec.dim) / spec.order;
    fo.max_condition = 1e15;

    ZetaAtZero out;
    out.fit = fit_expansion(z, v, basis, fo);
    out.c0 = out.fit.coefficient(0.0).real();
    out.drift = out.fit.stability;
    out.nu0 = spec.nullity();
    out.zeta0 = out.c0 - out.nu0;
    if (out.drift > opt.drift_tol) {
        std::ostringstream os;
        os << "heat-trace t^0 coefficient drifts by " << out.drift << " across sub-grids (tolerance " << opt.drift_tol
           << ")";
        throw OracleError(os.str());
    }
    return out;
}

}  // namespace qtrace::oracle
