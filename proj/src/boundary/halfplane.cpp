#include "qtrace/boundary/halfplane.hpp"

#include "qtrace/errors.hpp"

#include <cmath>
#include <sstream>

namespace qtrace::bdry {

namespace {

using Poly = std::vector<complex>;

Poly multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly linear_power(complex root, int k) {
    Poly p{complex(1.0)};
    for (int i = 0; i < k; ++i) p = multiply(p, Poly{-root, complex(1.0)});
    return p;
}

complex horner(const Poly& p, complex x) {
    complex s = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
    return s;
}

/// Coefficients of p(a + h) in powers of h.
Poly shifted(const Poly& p, complex a) {
    Poly q = p;
    const auto n = q.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) q[j - 1] += a * q[j];
    return q;
}

int degree(const Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<std::size_t>(i)] != complex(0.0)) return i;
    return -1;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

complex PoleSum::operator()(complex xi) const {
    complex s = 0;
    for (const auto& t : terms) s += t.coeff / std::pow(xi - t.pole, t.power);
    return s;
}

complex PoleSum::kernel(double x) const {
    const complex i(0.0, 1.0);
    complex s = 0;
    for (const auto& t : terms) {
        const bool upper = t.pole.imag() > 0.0;
        if (upper != (x >= 0.0)) continue;
        const complex v = i * std::pow(i * x, t.power - 1) / factorial(t.power - 1) * std::exp(i * t.pole * x);
        s += upper ? t.coeff * v : -t.coeff * v;
    }
    return s;
}

complex HalfplaneRational::operator()(complex xi) const {
    complex d = 1.0;
    for (const auto& [p, m] : poles) d *= std::pow(xi - p, m);
    return horner(numerator, xi) / d;
}

HalfplaneRational HalfplaneRational::from(const PoleSum& s) {
    HalfplaneRational r;
    for (const auto& t : s.terms) {
        bool found = false;
        for (auto& [p, m] : r.poles) {
            if (p == t.pole) {
                m = std::max(m, t.power);
                found = true;
            }
        }
        if (!found) r.poles.emplace_back(t.pole, t.power);
    }
    for (const auto& t : s.terms) {
        Poly num{t.coeff};
        for (const auto& [p, m] : r.poles) num = multiply(num, linear_power(p, p == t.pole ? m - t.power : m));
        if (r.numerator.size() < num.size()) r.numerator.resize(num.size(), complex(0.0));
        for (std::size_t i = 0; i < num.size(); ++i) r.numerator[i] += num[i];
    }
    return r;
}

HalfplaneSplit halfplane_split(const HalfplaneRational& r) {
    std::vector<std::pair<complex, int>> poles;
    for (const auto& [p, m] : r.poles) {
        if (m < 1) throw UsageError("pole multiplicity must be positive");
        if (std::abs(p.imag()) <= 1e-12 * std::max(1.0, std::abs(p))) {
            std::ostringstream os;
            os << "pole " << p.real() << " lies on the real axis; no half-plane splitting exists";
            throw DomainError(os.str());
        }
        bool merged = false;
        for (auto& q : poles) {
            if (q.first == p) {
                q.second += m;
                merged = true;
            }
        }
        if (!merged) poles.emplace_back(p, m);
    }
    int total = 0;
    for (const auto& q : poles) total += q.second;
    const int deg = degree(r.numerator);
    HalfplaneSplit out;
    if (deg < 0) return out;
    if (deg >= total) throw UsageError("rational function is not proper (numerator degree >= denominator degree)");

    for (const auto& [p, m] : poles) {
        Poly den{complex(1.0)};
        for (const auto& [q, mq] : poles)
            if (q != p) den = multiply(den, linear_power(q, mq));
        Poly ns = shifted(r.numerator, p);
        const Poly ds = shifted(den, p);
        ns.resize(static_cast<std::size_t>(std::max<int>(m, static_cast<int>(ns.size()))), complex(0.0));
        // g = ns / ds as a power series in h, first m coefficients
        Poly g(static_cast<std::size_t>(m), complex(0.0));
        for (int k = 0; k < m; ++k) {
            complex acc = ns[static_cast<std::size_t>(k)];
            for (int j = 1; j <= k && j < static_cast<int>(ds.size()); ++j)
                acc -= ds[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
            g[static_cast<std::size_t>(k)] = acc / ds[0];
        }
        auto& part = p.imag() > 0.0 ? out.plus : out.minus;
        for (int k = 1; k <= m; ++k) {
            const complex c = g[static_cast<std::size_t>(m - k)];
            if (c != complex(0.0)) part.terms.push_back({p, k, c});
        }
    }
    return out;
}

}  // namespace qtrace::bdry
