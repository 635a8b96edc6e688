#include "qtrace/symexpr/series.hpp"

#include "qtrace/errors.hpp"

#include <algorithm>
#include <map>

namespace qtrace::sym {

namespace {

// Degree → accumulated term, highest first.
using Series = std::map<Rational, Expression, std::greater<>>;

void accumulate(Series& s, const Rational& d, const Expression& e) {
    if (e.is_zero()) return;
    auto it = s.find(d);
    if (it == s.end()) {
        s.emplace(d, e);
    } else {
        it->second = it->second + e;
        if (it->second.is_zero()) s.erase(it);
    }
}

void truncate(Series& s, const Rational& floor) {
    for (auto it = s.begin(); it != s.end();) it = it->first < floor ? s.erase(it) : std::next(it);
}

Series product(const Series& a, const Series& b, const Rational& depth) {
    Series out;
    if (a.empty() || b.empty()) return out;
    const Rational floor = a.begin()->first + b.begin()->first - depth;
    for (const auto& [da, ea] : a)
        for (const auto& [db, eb] : b)
            if (da + db >= floor) accumulate(out, da + db, ea * eb);
    return out;
}

Series expand(const Expression& e, int m, const Rational& depth);

Series power(const Expression& base, const Rational& p, int m, const Rational& depth) {
    Series b = expand(base, m, depth);
    if (b.empty()) {
        if (p < 0) throw DomainError("power of a vanishing expansion");
        return {};
    }
    const Rational d0 = b.begin()->first;
    const Expression lead = b.begin()->second;
    b.erase(b.begin());
    Series out;
    const Expression leadp = rpow(lead, p);
    if (b.empty()) {
        out.emplace(d0 * p, leadp);
        return out;
    }
    // b^p = lead^p Σ_k C(p,k) u^k with u = rest/lead.
    Series u;
    const Expression inv = pow(lead, -1);
    for (const auto& [d, t] : b) u.emplace(d - d0, t * inv);
    const Rational gap = -u.begin()->first;
    const auto kmax = boost::rational_cast<std::int64_t>(depth / gap);
    Series uk;
    uk.emplace(Rational(0), Expression(1));
    Series acc;
    double binom = 1.0;
    const double pd = to_double(p);
    for (std::int64_t k = 0; k <= kmax; ++k) {
        if (k > 0) {
            binom *= (pd - static_cast<double>(k - 1)) / static_cast<double>(k);
            uk = product(uk, u, depth);
            truncate(uk, -depth);
        }
        if (binom == 0.0) break;
        for (const auto& [d, t] : uk) accumulate(acc, d, Expression(binom) * t);
    }
    for (const auto& [d, t] : acc) accumulate(out, d + d0 * p, leadp * t);
    return out;
}

Series expand(const Expression& e, int m, const Rational& depth) {
    Series out;
    if (e.is_zero()) return out;
    if (!e.depends_on_xi() && !e.depends_on(Var::Lambda)) {
        out.emplace(Rational(0), e);
        return out;
    }
    const Node& n = e.node();
    switch (n.kind) {
        case NodeKind::Variable:
            out.emplace(n.var == Var::Lambda ? Rational(m) : Rational(1), e);
            return out;
        case NodeKind::AbsXi:
            out.emplace(Rational(1), e);
            return out;
        case NodeKind::Add: {
            for (const auto& k : n.kids)
                for (const auto& [d, t] : expand(k, m, depth)) accumulate(out, d, t);
            if (!out.empty()) truncate(out, out.begin()->first - depth);
            return out;
        }
        case NodeKind::Mul: {
            out.emplace(Rational(0), Expression(1));
            for (const auto& k : n.kids) out = product(out, expand(k, m, depth), depth);
            return out;
        }
        case NodeKind::Pow:
            if (n.ipow >= 0) {
                out.emplace(Rational(0), Expression(1));
                const Series b = expand(n.kids[0], m, depth);
                for (std::int64_t i = 0; i < n.ipow; ++i) out = product(out, b, depth);
                return out;
            }
            return power(n.kids[0], Rational(n.ipow), m, depth);
        case NodeKind::RPow:
            return power(n.kids[0], n.rpow, m, depth);
        default:
            throw UsageError("homogeneous expansion does not support " + to_prefix(e, 80));
    }
}

}  // namespace

std::vector<HomogeneousPart> homogeneous_expansion(const Expression& e, int m, const Rational& depth) {
    const Series s = expand(e, m, depth);
    std::vector<HomogeneousPart> out;
    if (s.empty()) return out;
    const Rational floor = s.begin()->first - depth;
    for (const auto& [d, t] : s)
        if (d >= floor) out.push_back({d, t});
    return out;
}

}  // namespace qtrace::sym
