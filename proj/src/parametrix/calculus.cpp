#include "qtrace/parametrix/calculus.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/symexpr/evaluate.hpp"

#include <cmath>
#include <map>
#include <random>

namespace qtrace::param {

using sym::complex;
using sym::Var;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

std::vector<MultiIndex> multi_indices(int order, int dim) {
    std::vector<MultiIndex> out;
    if (dim == 1) {
        out.push_back({order, 0});
    } else {
        for (int a = order; a >= 0; --a) out.push_back({a, order - a});
    }
    return out;
}

double alpha_factorial(const MultiIndex& a) { return factorial(a[0]) * factorial(a[1]); }

/// Memoized ∂_ξ^α (or D_x^α) of the terms of a symbol.
class DerivativeCache {
public:
    DerivativeCache(const ParamSymbol& s, bool covariable) : s_(s), covariable_(covariable) {}

    ParamTerm get(int j, const MultiIndex& a) {
        const auto key = std::make_tuple(j, a[0], a[1]);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        ParamTerm out;
        if (a[0] == 0 && a[1] == 0) {
            out = s_.term(j);
        } else {
            const int axis = a[0] > 0 ? 0 : 1;
            MultiIndex prev = a;
            --prev[static_cast<std::size_t>(axis)];
            const ParamTerm base = get(j, prev);
            if (base.is_zero()) {
                out = ParamTerm(base.degree() - (covariable_ ? Rational(1) : Rational(0)), base.m(), base.dim());
            } else if (covariable_) {
                out = base.derivative(sym::xi_var(axis));
            } else {
                out = base.derivative(sym::x_var(axis)).scaled(Expression(complex(0.0, -1.0)));
            }
        }
        cache_.emplace(key, out);
        return out;
    }

private:
    const ParamSymbol& s_;
    bool covariable_;
    std::map<std::tuple<int, int, int>, ParamTerm> cache_;
};

int merged_resolvent_order(int a, int b) { return a != 0 ? a : b; }

}  // namespace

ParamSymbol compose(const ParamSymbol& a, const ParamSymbol& b, int depth) {
    if (a.dim() != b.dim()) throw UsageError("composing symbols of different dimensions");
    const int n = a.dim();
    ParamSymbol out(a.order() + b.order(), merged_resolvent_order(a.m(), b.m()), n);
    DerivativeCache dxi(a, true);
    DerivativeCache dx(b, false);
    for (int j = 0; j <= depth; ++j) {
        ParamTerm acc(out.order() - Rational(j), out.m(), n);
        for (int order = 0; order <= j; ++order)
            for (const auto& alpha : multi_indices(order, n))
                for (int j1 = 0; j1 <= j - order; ++j1) {
                    const int j2 = j - order - j1;
                    if (!a.has_term(j1)) {
                        out.warn("left factor truncated: term " + std::to_string(j1) + " unavailable");
                        continue;
                    }
                    if (!b.has_term(j2)) {
                        out.warn("right factor truncated: term " + std::to_string(j2) + " unavailable");
                        continue;
                    }
                    const ParamTerm l = dxi.get(j1, alpha);
                    if (l.is_zero()) continue;
                    const ParamTerm r = dx.get(j2, alpha);
                    if (r.is_zero()) continue;
                    ParamTerm prod = l * r;
                    if (order > 0) prod = prod.scaled(Expression(1.0 / alpha_factorial(alpha)));
                    acc = acc + prod;
                }
        out.push_back(acc);
    }
    for (const auto& w : a.warnings()) out.warn(w);
    for (const auto& w : b.warnings()) out.warn(w);
    return out;
}

PolyhomSymbol compose(const PolyhomSymbol& a, const PolyhomSymbol& b, int depth) {
    return PolyhomSymbol::from_param(compose(a.lift(), b.lift(), depth));
}

ParamSymbol compose_param(const PolyhomSymbol& a, const ParamSymbol& q, int depth) { return compose(a.lift(), q, depth); }

ParamSymbol resolvent_expansion(const DifferentialOperator& p, int depth, double sector_half_angle) {
    if (depth < 0) throw UsageError("expansion depth must be non-negative");
    require_elliptic(p, sector_half_angle);
    const int m = p.order();
    const int n = p.dim();
    ParamSymbol q(Rational(-m), m, n);
    q.push_back(ParamTerm::resolvent(p.principal(), m, n));

    ParamSymbol psym(Rational(m), 0, n);
    for (int l = 0; l <= m; ++l) psym.push_back(ParamTerm::lambda_free(p.symbol_part(m - l), Rational(m - l), n));
    psym.set_complete(true);
    DerivativeCache dp(psym, true);
    DerivativeCache dq(q, false);  // reads q as it grows; entries are only requested for k < j

    for (int j = 1; j <= depth; ++j) {
        ParamTerm sum(Rational(-j), m, n);
        for (int k = 0; k < j; ++k)
            for (int l = 0; l <= std::min(m, j - k); ++l) {
                const int order = j - k - l;
                for (const auto& alpha : multi_indices(order, n)) {
                    const ParamTerm a = dp.get(l, alpha);
                    if (a.is_zero()) continue;
                    const ParamTerm b = dq.get(k, alpha);
                    if (b.is_zero()) continue;
                    ParamTerm prod = a * b;
                    if (order > 0) prod = prod.scaled(Expression(1.0 / alpha_factorial(alpha)));
                    sum = sum + prod;
                }
            }
        ParamTerm qj = (q.term(0) * sum).scaled(Expression(-1));
        if (qj.is_zero()) qj = ParamTerm(Rational(-m - j), m, n);
        q.push_back(qj);
    }
    return q;
}

ParamSymbol operator_minus_lambda(const DifferentialOperator& p) {
    const int m = p.order();
    const int n = p.dim();
    ParamSymbol s(Rational(m), m, n);
    // p_m − λ is the resolvent base raised to the power +1.
    ParamTerm lead = ParamTerm::over({p.principal()}, Rational(m), m, n);
    lead.add_piece({-1}, Expression(1));
    s.push_back(lead);
    for (int l = 1; l <= m; ++l) s.push_back(ParamTerm::lambda_free(p.symbol_part(m - l), Rational(m - l), n));
    s.set_complete(true);
    return s;
}

ParamSymbol resolvent_difference(const DifferentialOperator& p1, const DifferentialOperator& p2, int depth) {
    if (p1.order() != p2.order()) throw UsageError("resolvent difference needs equal orders");
    if (p1.dim() != p2.dim()) throw UsageError("resolvent difference needs equal dimensions");
    const ParamSymbol q1 = resolvent_expansion(p1, depth);
    const ParamSymbol q2 = resolvent_expansion(p2, depth);
    ParamSymbol d = q1 - q2;
    const Expression a = p1.principal();
    const Expression b = p2.principal();
    if (!sym::structurally_equal(a, b)) {
        ParamTerm lead = ParamTerm::over({a, b}, Rational(-p1.order()), p1.order(), p1.dim());
        lead.add_piece({1, 1}, b - a);
        d.set_term(0, lead);
    }
    return d;
}

ParamSymbol commutator_resolvent_terms(const PolyhomSymbol& a, const PolyhomSymbol& a_prime,
                                       const DifferentialOperator& p, int depth) {
    const int n = p.dim();
    const int m = p.order();
    const Rational bound = Rational(n) + a.order() + a_prime.order();
    if (!(Rational(m) > bound))
        throw UsageError("commutator trace defect needs m > n + sigma + sigma' (m = " + std::to_string(m) +
                         ", n + sigma + sigma' = " + sym::to_string(bound) + ")");
    if (a.dim() != n || a_prime.dim() != n) throw UsageError("symbol dimensions differ from the operator's");
    const PolyhomSymbol psym = PolyhomSymbol::from_operator(p);
    const PolyhomSymbol c = compose(psym, a_prime, depth) - compose(a_prime, psym, depth);
    const ParamSymbol q = resolvent_expansion(p, depth);
    const ParamSymbol left = compose_param(a, q, depth);
    const ParamSymbol mid = compose(left, c.lift(), depth);
    return compose(mid, q, depth);
}

IntegrabilityReport integrability_report(const ParamTerm& term, int dim) {
    IntegrabilityReport rep;
    rep.dim = dim;
    rep.min_r = term.min_r();
    rep.integrable = term.is_zero() || rep.min_r > Rational(-dim);
    if (term.is_zero()) {
        rep.radial_slope = INFINITY;
        return rep;
    }
    sym::Program f(term.to_expression());
    std::vector<std::array<double, 2>> dirs;
    if (dim == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        for (int k = 0; k < 4; ++k) dirs.push_back({std::cos(0.4 + k * M_PI / 2), std::sin(0.4 + k * M_PI / 2)});
    }
    auto sample = [&](double rho) {
        double g = 0.0;
        for (const auto& w : dirs) {
            sym::Point pt;
            pt.set(Var::X1, 0.3).set(Var::X2, 0.7).set(Var::Lambda, -1.0);
            pt.set(Var::Xi1, rho * w[0]);
            if (dim == 2) pt.set(Var::Xi2, rho * w[1]);
            g = std::max(g, std::abs(f(pt)));
        }
        return g;
    };
    const double g1 = sample(1e-4);
    const double g2 = sample(1e-3);
    rep.radial_slope = (g1 == 0.0 || g2 == 0.0) ? INFINITY : std::log10(g2 / g1);
    const bool numeric_integrable = rep.radial_slope > -dim + 0.05;
    rep.numeric_agrees = numeric_integrable == rep.integrable || (numeric_integrable && !rep.integrable);
    return rep;
}

ParametrixCheck parametrix_identity_check(const DifferentialOperator& p, const ParamSymbol& q, int samples) {
    ParamSymbol qc = q;
    qc.set_complete(true);
    const int J = q.depth();
    const int m = p.order();
    const int n = p.dim();
    const ParamSymbol comp = compose(operator_minus_lambda(p), qc, J + m);
    std::vector<Expression> terms{Expression(-1)};
    for (const auto& t : comp.terms()) terms.push_back(t.to_expression());
    sym::Program res(sym::add(std::move(terms)));
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ParametrixCheck out;
    out.samples = samples;
    for (int s = 0; s < samples; ++s) {
        sym::Point pt;
        pt.set(Var::X1, 2 * M_PI * unit(rng)).set(Var::X2, 2 * M_PI * unit(rng));
        const double rho = 2.0 + 30.0 * unit(rng);
        const double th = 2 * M_PI * unit(rng);
        pt.set(Var::Xi1, n == 1 ? (unit(rng) < 0.5 ? -rho : rho) : rho * std::cos(th));
        if (n == 2) pt.set(Var::Xi2, rho * std::sin(th));
        const double lam = std::pow(rho, m) * (0.1 + unit(rng));
        pt.set(Var::Lambda, -lam);
        const double r = std::abs(res(pt));
        const double weight = std::pow(1.0 + rho * rho + std::pow(lam, 2.0 / m), 0.5 * (J + 1));
        out.max_abs = std::max(out.max_abs, r);
        out.fitted_constant = std::max(out.fitted_constant, r * weight);
    }
    return out;
}

}  // namespace qtrace::param
