#include "qtrace/boundary/sgo.hpp"

#include "qtrace/errors.hpp"

#include <cmath>
#include <sstream>

namespace qtrace::bdry {

namespace {

using sym::Var;

double factorial(int n) { return std::tgamma(n + 1.0); }

void require_decay(const Expression& rate, const std::vector<Point>& witnesses, const char* what) {
    for (const auto& p : witnesses) {
        const auto v = sym::evaluate(rate, p);
        if (!(v.real() > 0.0)) {
            std::ostringstream os;
            os << what << " " << sym::to_prefix(rate, 120) << " has nonpositive real part at " << p.describe()
               << "; the kernel does not decay";
            throw DomainError(os.str());
        }
    }
}

}  // namespace

std::complex<double> SGKernel::operator()(double x, double y, const Point& at) const {
    std::complex<double> s = 0;
    for (const auto& t : terms) {
        const auto c = sym::evaluate(t.coeff, at);
        const auto al = sym::evaluate(t.alpha, at);
        const auto be = sym::evaluate(t.beta, at);
        s += c * std::pow(x, t.a) * std::pow(y, t.b) * std::exp(-al * x - be * y);
    }
    return s;
}

SGKernel SGKernel::operator+(const SGKernel& o) const {
    SGKernel r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    return r;
}

SGKernel SGKernel::scaled(const Expression& c) const {
    SGKernel r = *this;
    for (auto& t : r.terms) t.coeff = c * t.coeff;
    return r;
}

std::complex<double> ToeplitzKernel::operator()(double x, double y, const Point& at) const {
    std::complex<double> s = 0;
    for (const auto& t : terms)
        s += sym::evaluate(t.coeff, at) * std::exp(-sym::evaluate(t.rate, at) * std::abs(x - y));
    return s;
}

Expression ToeplitzKernel::diagonal() const {
    std::vector<Expression> parts;
    for (const auto& t : terms) parts.push_back(t.coeff);
    return sym::add(parts);
}

ToeplitzKernel ToeplitzKernel::operator-(const ToeplitzKernel& o) const {
    ToeplitzKernel r = *this;
    for (const auto& t : o.terms) r.terms.push_back({-t.coeff, t.rate});
    return r;
}

Expression dirichlet_sigma(double mass2) {
    const Expression xi = Expression::variable(Var::Xi1);
    const Expression lam = Expression::variable(Var::Lambda);
    return sym::rpow(xi * xi + mass2 - lam, sym::Rational(1, 2));
}

ToeplitzKernel full_line_resolvent(const Expression& sigma) {
    return ToeplitzKernel{{{sym::pow(2 * sigma, -1), sigma}}};
}

SGKernel dirichlet_resolvent_sgo(double mass2) {
    const Expression s = dirichlet_sigma(mass2);
    return SGKernel{{{-sym::pow(2 * s, -1), 0, 0, s, s}}};
}

std::vector<Point> default_witnesses() {
    std::vector<Point> w;
    for (double xi : {0.5, 1.0, 3.0})
        for (double lam : {-1.0, -10.0}) w.push_back(Point().set(Var::Xi1, xi).set(Var::Lambda, lam));
    return w;
}

Expression normal_trace(const SGKernel& g, const std::vector<Point>& witnesses) {
    std::vector<Expression> parts;
    for (const auto& t : g.terms) {
        if (t.coeff.is_zero()) continue;
        const Expression rate = t.alpha + t.beta;
        require_decay(rate, witnesses, "diagonal rate");
        const int n = t.a + t.b;
        parts.push_back(t.coeff * factorial(n) * sym::pow(rate, -(n + 1)));
    }
    return sym::add(parts);
}

SGKernel sgo_compose(const SGKernel& g, const ToeplitzKernel& k, const std::vector<Point>& witnesses) {
    SGKernel out;
    for (const auto& t : g.terms) {
        if (t.coeff.is_zero()) continue;
        require_decay(t.alpha, witnesses, "left rate");
        for (const auto& q : k.terms) {
            if (q.coeff.is_zero()) continue;
            require_decay(q.rate, witnesses, "convolution rate");
            const Expression c = t.coeff * q.coeff;
            const Expression g2 = t.beta + q.rate;
            require_decay(g2, witnesses, "composed rate");
            const int b = t.b;
            const double bf = factorial(b);
            if (sym::structurally_equal(t.beta, q.rate)) {
                // z^b integrated up to y with no exponential weight
                out.terms.push_back({c * (1.0 / (b + 1)), t.a, b + 1, t.alpha, q.rate});
                for (int i = 0; i <= b; ++i)
                    out.terms.push_back({c * (bf / factorial(i)) * sym::pow(g2, -(b + 1 - i)), t.a, i, t.alpha, t.beta});
                continue;
            }
            const Expression g1 = t.beta - q.rate;
            out.terms.push_back({c * bf * sym::pow(g1, -(b + 1)), t.a, 0, t.alpha, q.rate});
            for (int i = 0; i <= b; ++i) {
                const Expression w = sym::pow(g2, -(b + 1 - i)) - sym::pow(g1, -(b + 1 - i));
                out.terms.push_back({c * (bf / factorial(i)) * w, t.a, i, t.alpha, t.beta});
            }
        }
    }
    return out;
}

Expression composed_trace(const SGKernel& g, const ToeplitzKernel& k, const std::vector<Point>& witnesses) {
    auto binom = [](int n, int i) { return factorial(n) / (factorial(i) * factorial(n - i)); };
    std::vector<Expression> parts;
    for (const auto& t : g.terms) {
        if (t.coeff.is_zero()) continue;
        const Expression ab = t.alpha + t.beta;
        require_decay(ab, witnesses, "diagonal rate");
        for (const auto& q : k.terms) {
            if (q.coeff.is_zero()) continue;
            const Expression as = t.alpha + q.rate;
            const Expression bs = t.beta + q.rate;
            require_decay(as, witnesses, "composed rate");
            require_decay(bs, witnesses, "composed rate");
            const Expression c = t.coeff * q.coeff;
            // x > y with x = y + u, then y > x with y = x + u
            for (int i = 0; i <= t.a; ++i)
                parts.push_back(c * (binom(t.a, i) * factorial(t.b + i) * factorial(t.a - i)) *
                                sym::pow(ab, -(t.b + i + 1)) * sym::pow(as, -(t.a - i + 1)));
            for (int i = 0; i <= t.b; ++i)
                parts.push_back(c * (binom(t.b, i) * factorial(t.a + i) * factorial(t.b - i)) *
                                sym::pow(ab, -(t.a + i + 1)) * sym::pow(bs, -(t.b - i + 1)));
        }
    }
    return sym::add(parts);
}

SGKernel sgo_compose(const SGKernel& g, const SGKernel& h, const std::vector<Point>& witnesses) {
    SGKernel out;
    for (const auto& t : g.terms) {
        for (const auto& u : h.terms) {
            if (t.coeff.is_zero() || u.coeff.is_zero()) continue;
            const Expression rate = t.beta + u.alpha;
            require_decay(rate, witnesses, "inner rate");
            const int n = t.b + u.a;
            out.terms.push_back({t.coeff * u.coeff * factorial(n) * sym::pow(rate, -(n + 1)), t.a, u.b, t.alpha, u.beta});
        }
    }
    return out;
}

}  // namespace qtrace::bdry
