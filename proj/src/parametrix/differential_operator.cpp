#include "qtrace/parametrix/differential_operator.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/symexpr/evaluate.hpp"
#include "qtrace/symexpr/sphere_rule.hpp"

#include <cmath>

namespace qtrace::param {

using sym::complex;
using sym::Var;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

Expression monomial(const MultiIndex& a) {
    return sym::pow(Expression::variable(Var::Xi1), a[0]) * sym::pow(Expression::variable(Var::Xi2), a[1]);
}

}  // namespace

DifferentialOperator DifferentialOperator::from_symbol(const Expression& symbol, int dim, int max_x_degree) {
    if (dim != 1 && dim != 2) throw UsageError("operators live on T^1 or T^2");
    if (symbol.depends_on(Var::Lambda)) throw UsageError("operator symbol must not contain lam");
    if (dim == 1 && symbol.mentions(Var::Xi2)) throw UsageError("operator symbol uses xi2 on a one-dimensional torus");
    constexpr int kMaxOrder = 12;
    DifferentialOperator op(dim);
    // c_α = ∂_ξ^α p |_{ξ=0} / α!
    Expression d1 = symbol;
    bool vanished = false;
    for (int a1 = 0; a1 <= kMaxOrder + 1 && !d1.is_zero(); ++a1) {
        Expression d2 = d1;
        for (int a2 = 0; a2 <= (dim == 2 ? kMaxOrder + 1 : 0) && !d2.is_zero(); ++a2) {
            if (a1 + a2 > kMaxOrder) {
                throw UsageError("operator symbol is not a polynomial in xi of order <= 12: " + sym::to_prefix(symbol, 120));
            }
            Expression at0 = sym::substitute(sym::substitute(d2, Var::Xi1, 0.0), Var::Xi2, 0.0);
            if (!at0.is_zero()) {
                ScalarField c = ScalarField::from_expression(at0, dim, max_x_degree)
                                    .scaled(1.0 / (factorial(a1) * factorial(a2)));
                op.set({a1, a2}, c);
            }
            d2 = sym::differentiate(d2, Var::Xi2);
        }
        d1 = sym::differentiate(d1, Var::Xi1);
        vanished = d1.is_zero();
    }
    if (!vanished && !d1.is_zero()) throw UsageError("operator symbol is not polynomial in xi");
    if (op.coeffs_.empty()) throw UsageError("operator symbol is identically zero");
    return op;
}

int DifferentialOperator::order() const {
    int m = 0;
    for (const auto& kv : coeffs_) m = std::max(m, kv.first[0] + kv.first[1]);
    return m;
}

void DifferentialOperator::set(const MultiIndex& alpha, const ScalarField& c) {
    if (dim_ == 1 && alpha[1] != 0) throw UsageError("multi-index in xi2 for a one-dimensional operator");
    if (c.is_zero()) {
        coeffs_.erase(alpha);
    } else {
        coeffs_[alpha] = c;
    }
}

Expression DifferentialOperator::symbol_part(int degree) const {
    std::vector<Expression> terms;
    for (const auto& [a, c] : coeffs_)
        if (a[0] + a[1] == degree) terms.push_back(c.to_expression() * monomial(a));
    return sym::add(std::move(terms));
}

Expression DifferentialOperator::full_symbol() const {
    std::vector<Expression> terms;
    for (const auto& [a, c] : coeffs_) terms.push_back(c.to_expression() * monomial(a));
    return sym::add(std::move(terms));
}

DifferentialOperator DifferentialOperator::compose(const DifferentialOperator& o) const {
    // Σ_γ (1/γ!) ∂_ξ^γ (c_α ξ^α) D_x^γ (d_β ξ^β), exact on coefficient level.
    DifferentialOperator out(std::max(dim_, o.dim_));
    for (const auto& [a, c] : coeffs_)
        for (const auto& [b, d] : o.coeffs_)
            for (int g1 = 0; g1 <= a[0]; ++g1)
                for (int g2 = 0; g2 <= a[1]; ++g2) {
                    // ∂_ξ^γ ξ^α = α!/(α−γ)! ξ^{α−γ}
                    const double falling = factorial(a[0]) / factorial(a[0] - g1) * factorial(a[1]) / factorial(a[1] - g2);
                    ScalarField dd = d;
                    for (int i = 0; i < g1; ++i) dd = dd.derivative(0);
                    for (int i = 0; i < g2; ++i) dd = dd.derivative(1);
                    if (dd.is_zero()) continue;
                    const complex di = std::pow(complex(0.0, -1.0), g1 + g2);
                    const ScalarField term = (c * dd).scaled(di * falling / (factorial(g1) * factorial(g2)));
                    const MultiIndex mi{a[0] - g1 + b[0], a[1] - g2 + b[1]};
                    auto it = out.coeffs_.find(mi);
                    out.set(mi, it == out.coeffs_.end() ? term : it->second + term);
                }
    return out;
}

DifferentialOperator DifferentialOperator::power(int k) const {
    if (k < 1) throw UsageError("operator power must be positive");
    DifferentialOperator out = *this;
    for (int i = 1; i < k; ++i) out = out.compose(*this);
    return out;
}

DifferentialOperator DifferentialOperator::operator+(const DifferentialOperator& o) const {
    DifferentialOperator out = *this;
    out.dim_ = std::max(dim_, o.dim_);
    for (const auto& [a, c] : o.coeffs_) {
        auto it = out.coeffs_.find(a);
        out.set(a, it == out.coeffs_.end() ? c : it->second + c);
    }
    return out;
}

DifferentialOperator DifferentialOperator::operator-(const DifferentialOperator& o) const {
    DifferentialOperator neg(o.dim_);
    for (const auto& [a, c] : o.coeffs_) neg.set(a, c.scaled(-1.0));
    return *this + neg;
}

bool DifferentialOperator::is_constant_coefficient() const {
    for (const auto& kv : coeffs_)
        if (!kv.second.is_constant()) return false;
    return true;
}

int DifferentialOperator::x_bandwidth(int axis) const {
    int b = 0;
    for (const auto& kv : coeffs_) b = std::max(b, kv.second.degree(axis));
    return b;
}

EllipticityReport check_ellipticity(const DifferentialOperator& p, double sector_half_angle, int x_samples) {
    EllipticityReport rep;
    rep.min_abs_principal = INFINITY;
    rep.min_distance_to_cut_angle = INFINITY;
    sym::Program pm(p.principal());
    const auto rule = sym::sphere_quadrature(p.dim(), 31);
    const int nx2 = p.dim() == 2 ? x_samples : 1;
    for (int a = 0; a < x_samples; ++a)
        for (int b = 0; b < nx2; ++b)
            for (const auto& w : rule.nodes) {
                sym::Point pt;
                pt.set(Var::X1, 2.0 * M_PI * a / x_samples).set(Var::X2, 2.0 * M_PI * b / nx2);
                pt.set(Var::Xi1, w[0]);
                if (p.dim() == 2) pt.set(Var::Xi2, w[1]);
                const complex v = pm(pt);
                const double mag = std::abs(v);
                const double dist = mag == 0.0 ? 0.0 : M_PI - std::fabs(std::arg(v));
                if (mag < rep.min_abs_principal || dist < rep.min_distance_to_cut_angle) {
                    if (mag < 1e-12 || dist <= sector_half_angle) rep.witness = pt.describe() + " p_m=" + sym::format_complex(v);
                }
                rep.min_abs_principal = std::min(rep.min_abs_principal, mag);
                rep.min_distance_to_cut_angle = std::min(rep.min_distance_to_cut_angle, dist);
            }
    rep.pass = rep.min_abs_principal > 1e-12 && rep.min_distance_to_cut_angle > sector_half_angle;
    return rep;
}

void require_elliptic(const DifferentialOperator& p, double sector_half_angle) {
    const auto rep = check_ellipticity(p, sector_half_angle);
    if (!rep.pass)
        throw ConstructionError("principal symbol fails ellipticity with the ray condition at " + rep.witness);
}

}  // namespace qtrace::param
