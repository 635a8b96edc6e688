#include "qtrace/logresidue/transform.hpp"

#include "qtrace/errors.hpp"

#include <cmath>

namespace qtrace::logres {

using sym::Var;

num::QuadResult line_integral(const sym::Program& f, const Point& at, double tol) {
    return num::integrate_negative_axis(
        [&](double t) {
            Point p = at;
            p.set(Var::Lambda, t);
            return f(p);
        },
        tol);
}

double decay_exponent(const sym::Program& f, const Point& at) {
    Point a = at, b = at;
    a.set(Var::Lambda, -1e4);
    b.set(Var::Lambda, -1e6);
    const double fa = std::abs(f(a));
    const double fb = std::abs(f(b));
    if (fb == 0.0) return -INFINITY;
    if (fa == 0.0) return INFINITY;
    return std::log10(fb / fa) / 2.0;
}

Expression log_transform(const Expression& f, const Point& probe) {
    if (f.is_zero()) return Expression(0);
    if (!f.depends_on(Var::Lambda)) throw DecayError("log transform of a lambda-independent function diverges");
    const double slope = decay_exponent(sym::Program(f), probe);
    if (slope > -1.05)
        throw DecayError("log transform needs O(lam^(-1-eps)) decay; measured exponent " + sym::format_number(slope) +
                         " at " + probe.describe());
    return sym::lambda_integral(f);
}

Expression log_transform(const ParamTerm& term) {
    const auto& bases = term.bases();
    std::vector<Expression> out;
    for (const auto& piece : term.pieces()) {
        if (piece.nu() < 2)
            throw DecayError("log transform needs at least two resolvent factors; piece has nu = " +
                             std::to_string(piece.nu()));
        std::vector<std::size_t> used;
        bool negative = false;
        for (std::size_t b = 0; b < piece.exps.size(); ++b) {
            if (piece.exps[b] != 0) used.push_back(b);
            if (piece.exps[b] < 0) negative = true;
        }
        if (!negative && used.size() == 1) {
            const int e = piece.exps[used[0]];
            out.push_back(Expression(-1.0 / (e - 1)) * piece.coeff * sym::pow(bases[used[0]], 1 - e));
        } else if (!negative && used.size() == 2 && piece.exps[used[0]] == 1 && piece.exps[used[1]] == 1) {
            const Expression& a = bases[used[0]];
            const Expression& b = bases[used[1]];
            out.push_back(piece.coeff * (sym::log(a) - sym::log(b)) * sym::pow(b - a, -1));
        } else {
            ParamTerm single = ParamTerm::over(bases, term.degree(), term.m(), term.dim());
            single.add_piece(piece.exps, piece.coeff);
            out.push_back(sym::lambda_integral(single.to_expression()));
        }
    }
    return sym::add(std::move(out));
}

PolyhomSymbol log_transform_terms(const ParamSymbol& q) {
    PolyhomSymbol out(q.order() + Rational(q.m()), q.dim());
    for (const auto& t : q.terms()) out.push_back(t.is_zero() ? Expression(0) : log_transform(t));
    out.set_complete(false);
    for (const auto& w : q.warnings()) out.warn(w);
    return out;
}

namespace {

struct Segment {
    std::function<complex(double)> z;   // λ(s)
    std::function<complex(double)> dz;  // λ'(s)
    double a;
    double b;
};

}  // namespace

complex contour_log_integral(const sym::Program& f, const KeyholeContour& c, const Point& at, double* error) {
    if (!(c.inner_radius > 0.0 && c.outer_radius > c.inner_radius && c.half_angle > 0.0 && c.half_angle < M_PI))
        throw UsageError("keyhole contour needs 0 < r < R and 0 < theta < pi");
    const double phi = M_PI - c.half_angle;
    const double r = c.inner_radius;
    const double big = c.outer_radius;
    const complex I(0.0, 1.0);
    const std::vector<Segment> segs{
        {[&](double w) { return big * std::exp(I * w); }, [&](double w) { return I * big * std::exp(I * w); }, -phi, phi},
        {[&](double s) { return s * std::exp(I * phi); }, [&](double) { return std::exp(I * phi); }, big, r},
        {[&](double w) { return r * std::exp(I * w); }, [&](double w) { return I * r * std::exp(I * w); }, phi, -phi},
        {[&](double s) { return s * std::exp(-I * phi); }, [&](double) { return std::exp(-I * phi); }, r, big},
    };
    complex total(0.0, 0.0);
    double err = 0.0;
    for (const auto& seg : segs) {
        auto integrand = [&](double s) {
            const complex lam = seg.z(s);
            Point p = at;
            p.set(Var::Lambda, lam);
            complex v;
            try {
                v = f(p);
            } catch (const DomainError&) {
                throw ContourError("integrand is singular on the contour at lam = " + sym::format_complex(lam));
            }
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e12)
                throw ContourError("integrand blows up on the contour at lam = " + sym::format_complex(lam) +
                                   "; a pole sits on or next to the curve");
            return std::log(lam) * v * seg.dz(s);
        };
        // Orientation is carried by the limits.
        const double lo = std::min(seg.a, seg.b);
        const double hi = std::max(seg.a, seg.b);
        const auto q = num::integrate_interval(integrand, lo, hi, c.quad_tol);
        total += seg.a < seg.b ? q.value : -q.value;
        err += q.error;
    }
    if (error) *error = err / (2 * M_PI);
    return total / (2 * M_PI * I);
}

ContourCheck contour_check(const Expression& f, const KeyholeContour& contour, const Point& at, double tol) {
    ContourCheck rep;
    rep.tol = tol;
    if (f.is_zero()) {
        rep.pass = true;
        return rep;
    }
    const sym::Program prog(f);
    const double slope = decay_exponent(prog, at);
    if (slope > -1.05)
        throw DecayError("keyhole identity needs O(lam^(-1-eps)) decay; measured exponent " + sym::format_number(slope));
    rep.contour_value = contour_log_integral(prog, contour, at, &rep.contour_error);
    const auto line = line_integral(prog, at);
    rep.line_value = line.value;
    rep.line_error = line.error;
    rep.transform_value = -line.value;
    rep.abs_diff = std::abs(rep.contour_value - rep.line_value);
    rep.pass = rep.abs_diff <= tol;
    return rep;
}

}  // namespace qtrace::logres
