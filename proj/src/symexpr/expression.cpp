#include "qtrace/symexpr/expression.hpp"

#include "qtrace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qtrace::sym {

namespace {

constexpr std::uint32_t kAbsXiBit = 1u << kVarCount;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return splitmix(h ^ (v + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2))); }

std::uint64_t bits_of(double d) {
    if (d == 0.0) d = 0.0;  // fold -0
    std::uint64_t u = 0;
    std::memcpy(&u, &d, sizeof u);
    return u;
}

Expression finish(Node&& n) {
    std::uint64_t h = splitmix(static_cast<std::uint64_t>(n.kind) + 1);
    std::uint32_t mask = 0;
    switch (n.kind) {
        case NodeKind::Const:
            h = combine(h, bits_of(n.value.real()));
            h = combine(h, bits_of(n.value.imag()));
            break;
        case NodeKind::Variable:
            h = combine(h, static_cast<std::uint64_t>(n.var));
            mask |= 1u << static_cast<int>(n.var);
            break;
        case NodeKind::AbsXi:
            mask |= kAbsXiBit;
            break;
        case NodeKind::Pow:
            h = combine(h, static_cast<std::uint64_t>(n.ipow));
            break;
        case NodeKind::RPow:
            h = combine(h, static_cast<std::uint64_t>(n.rpow.numerator()));
            h = combine(h, static_cast<std::uint64_t>(n.rpow.denominator()));
            break;
        case NodeKind::ExpI:
            h = combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(n.freq[0])));
            h = combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(n.freq[1])));
            mask |= (n.freq[0] != 0 ? 1u << static_cast<int>(Var::X1) : 0u);
            mask |= (n.freq[1] != 0 ? 1u << static_cast<int>(Var::X2) : 0u);
            break;
        default:
            break;
    }
    for (const auto& k : n.kids) {
        h = combine(h, k.hash());
        mask |= k.node().var_mask;
    }
    if (n.kind == NodeKind::LamInt) mask &= ~(1u << static_cast<int>(Var::Lambda));
    n.hash = h;
    n.var_mask = mask;
    return Expression(std::make_shared<const Node>(std::move(n)));
}

Expression make_const(complex c) {
    Node n;
    n.kind = NodeKind::Const;
    n.value = c;
    return finish(std::move(n));
}

Expression raw(NodeKind kind, std::vector<Expression> kids) {
    Node n;
    n.kind = kind;
    n.kids = std::move(kids);
    return finish(std::move(n));
}

Expression raw_pow(const Expression& b, std::int64_t k) {
    Node n;
    n.kind = NodeKind::Pow;
    n.ipow = k;
    n.kids = {b};
    return finish(std::move(n));
}

Expression raw_rpow(const Expression& b, const Rational& p) {
    Node n;
    n.kind = NodeKind::RPow;
    n.rpow = p;
    n.kids = {b};
    return finish(std::move(n));
}

const Expression& zero_expr() {
    static const Expression z = make_const({0.0, 0.0});
    return z;
}

const Expression& one_expr() {
    static const Expression o = make_const({1.0, 0.0});
    return o;
}

bool deep_equal(const Node& a, const Node& b) {
    if (&a == &b) return true;
    if (a.hash != b.hash || a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
    switch (a.kind) {
        case NodeKind::Const:
            if (a.value != b.value) return false;
            break;
        case NodeKind::Variable:
            if (a.var != b.var) return false;
            break;
        case NodeKind::Pow:
            if (a.ipow != b.ipow) return false;
            break;
        case NodeKind::RPow:
            if (a.rpow != b.rpow) return false;
            break;
        case NodeKind::ExpI:
            if (a.freq != b.freq) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!deep_equal(a.kids[i].node(), b.kids[i].node())) return false;
    return true;
}

void sort_canonical(std::vector<Expression>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Expression& a, const Expression& b) {
        if (a.hash() != b.hash()) return a.hash() < b.hash();
        return static_cast<int>(a.kind()) < static_cast<int>(b.kind());
    });
}

complex int_power(complex base, std::int64_t n) {
    if (n < 0) {
        if (base == complex(0.0, 0.0)) throw DomainError("division by zero: 0 raised to a negative power");
        base = complex(1.0, 0.0) / base;
        n = -n;
    }
    complex acc(1.0, 0.0);
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

// Index of structurally equal groups keyed by hash.
template <class Group>
Group* find_group(std::vector<Group>& groups, std::unordered_multimap<std::uint64_t, std::size_t>& index,
                  const Expression& key) {
    auto range = index.equal_range(key.hash());
    for (auto it = range.first; it != range.second; ++it)
        if (structurally_equal(groups[it->second].key, key)) return &groups[it->second];
    return nullptr;
}

struct TermGroup {
    Expression key;
    complex coef;
};

struct BaseGroup {
    Expression key;
    Rational exponent;
};

Expression scale_raw(const Expression& rest, complex c) {
    if (c == complex(1.0, 0.0)) return rest;
    std::vector<Expression> kids{make_const(c)};
    if (rest.kind() == NodeKind::Mul) {
        kids.insert(kids.end(), rest.node().kids.begin(), rest.node().kids.end());
    } else {
        kids.push_back(rest);
    }
    return raw(NodeKind::Mul, std::move(kids));
}

}  // namespace

std::string_view var_name(Var v) {
    switch (v) {
        case Var::X1: return "x1";
        case Var::X2: return "x2";
        case Var::Xi1: return "xi1";
        case Var::Xi2: return "xi2";
        case Var::Lambda: return "lam";
    }
    return "?";
}

std::optional<Var> parse_var(std::string_view name) {
    if (name == "x1" || name == "x") return Var::X1;
    if (name == "x2") return Var::X2;
    if (name == "xi1" || name == "xi") return Var::Xi1;
    if (name == "xi2") return Var::Xi2;
    if (name == "lam" || name == "lambda") return Var::Lambda;
    return std::nullopt;
}

Expression::Expression() : node_(zero_expr().node_) {}
Expression::Expression(complex c) : node_(make_const(c).node_) {}
Expression::Expression(double c) : Expression(complex(c, 0.0)) {}
Expression::Expression(int c) : Expression(complex(static_cast<double>(c), 0.0)) {}

Expression Expression::variable(Var v) {
    Node n;
    n.kind = NodeKind::Variable;
    n.var = v;
    return finish(std::move(n));
}

Expression Expression::rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw UsageError("rational constant with zero denominator");
    return Expression(static_cast<double>(num) / static_cast<double>(den));
}

NodeKind Expression::kind() const { return node_->kind; }
std::uint64_t Expression::hash() const { return node_->hash; }
bool Expression::is_constant() const { return node_->kind == NodeKind::Const; }
bool Expression::is_zero() const { return is_constant() && node_->value == complex(0.0, 0.0); }
bool Expression::is_one() const { return is_constant() && node_->value == complex(1.0, 0.0); }

std::optional<complex> Expression::constant_value() const {
    if (!is_constant()) return std::nullopt;
    return node_->value;
}

bool Expression::depends_on(Var v) const {
    std::uint32_t bits = 1u << static_cast<int>(v);
    if (v == Var::Xi1 || v == Var::Xi2) bits |= kAbsXiBit;
    return (node_->var_mask & bits) != 0;
}

bool Expression::mentions(Var v) const { return (node_->var_mask & (1u << static_cast<int>(v))) != 0; }

std::size_t Expression::size() const {
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (const auto& k : n->kids) stack.push_back(k.get());
    }
    return seen.size();
}

bool structurally_equal(const Expression& a, const Expression& b) { return deep_equal(a.node(), b.node()); }

Expression add(std::vector<Expression> terms) {
    std::vector<Expression> flat;
    flat.reserve(terms.size());
    for (auto& t : terms) {
        if (t.kind() == NodeKind::Add) {
            flat.insert(flat.end(), t.node().kids.begin(), t.node().kids.end());
        } else {
            flat.push_back(std::move(t));
        }
    }
    complex csum(0.0, 0.0);
    std::vector<TermGroup> groups;
    std::unordered_multimap<std::uint64_t, std::size_t> index;
    for (const auto& t : flat) {
        if (t.is_constant()) {
            csum += t.node().value;
            continue;
        }
        complex c(1.0, 0.0);
        Expression rest = t;
        if (t.kind() == NodeKind::Mul && t.node().kids.front().is_constant()) {
            const auto& kids = t.node().kids;
            c = kids.front().node().value;
            if (kids.size() == 2) {
                rest = kids[1];
            } else {
                rest = raw(NodeKind::Mul, std::vector<Expression>(kids.begin() + 1, kids.end()));
            }
        }
        if (auto* g = find_group(groups, index, rest)) {
            g->coef += c;
        } else {
            index.emplace(rest.hash(), groups.size());
            groups.push_back({rest, c});
        }
    }
    std::vector<Expression> out;
    for (const auto& g : groups) {
        if (g.coef == complex(0.0, 0.0)) continue;
        out.push_back(scale_raw(g.key, g.coef));
    }
    if (csum != complex(0.0, 0.0)) out.push_back(make_const(csum));
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out.front();
    sort_canonical(out);
    return raw(NodeKind::Add, std::move(out));
}

Expression mul(std::vector<Expression> factors) {
    std::vector<Expression> flat;
    flat.reserve(factors.size());
    for (auto& f : factors) {
        if (f.kind() == NodeKind::Mul) {
            flat.insert(flat.end(), f.node().kids.begin(), f.node().kids.end());
        } else {
            flat.push_back(std::move(f));
        }
    }
    complex c(1.0, 0.0);
    std::array<int, 2> freq{0, 0};
    std::vector<BaseGroup> groups;
    std::unordered_multimap<std::uint64_t, std::size_t> index;
    auto push = [&](const Expression& base, const Rational& e) {
        if (auto* g = find_group(groups, index, base)) {
            g->exponent += e;
        } else {
            index.emplace(base.hash(), groups.size());
            groups.push_back({base, e});
        }
    };
    for (const auto& f : flat) {
        switch (f.kind()) {
            case NodeKind::Const:
                c *= f.node().value;
                break;
            case NodeKind::ExpI:
                freq[0] += f.node().freq[0];
                freq[1] += f.node().freq[1];
                break;
            case NodeKind::Pow:
                push(f.node().kids[0], Rational(f.node().ipow));
                break;
            case NodeKind::RPow:
                push(f.node().kids[0], f.node().rpow);
                break;
            default:
                push(f, Rational(1));
                break;
        }
    }
    if (c == complex(0.0, 0.0)) return zero_expr();
    std::vector<Expression> out;
    for (const auto& g : groups) {
        if (g.exponent == 0) continue;
        if (g.exponent == 1) {
            out.push_back(g.key);
        } else if (is_integer(g.exponent)) {
            out.push_back(raw_pow(g.key, g.exponent.numerator()));
        } else {
            out.push_back(raw_rpow(g.key, g.exponent));
        }
    }
    if (freq[0] != 0 || freq[1] != 0) out.push_back(expi(freq[0], freq[1]));
    if (out.empty()) return make_const(c);
    sort_canonical(out);
    if (c == complex(1.0, 0.0) && out.size() == 1) return out.front();
    if (c != complex(1.0, 0.0)) out.insert(out.begin(), make_const(c));
    return raw(NodeKind::Mul, std::move(out));
}

Expression operator+(const Expression& a, const Expression& b) { return add({a, b}); }
Expression operator-(const Expression& a, const Expression& b) { return add({a, -b}); }
Expression operator*(const Expression& a, const Expression& b) { return mul({a, b}); }
Expression operator/(const Expression& a, const Expression& b) { return mul({a, pow(b, -1)}); }
Expression operator-(const Expression& a) { return mul({make_const({-1.0, 0.0}), a}); }
Expression& operator+=(Expression& a, const Expression& b) {
    a = a + b;
    return a;
}
Expression& operator*=(Expression& a, const Expression& b) {
    a = a * b;
    return a;
}

Expression pow(const Expression& base, std::int64_t n) {
    if (n == 0) return one_expr();
    if (n == 1) return base;
    switch (base.kind()) {
        case NodeKind::Const:
            return make_const(int_power(base.node().value, n));
        case NodeKind::Pow:
            return pow(base.node().kids[0], base.node().ipow * n);
        case NodeKind::RPow:
            return rpow(base.node().kids[0], base.node().rpow * Rational(n));
        case NodeKind::Mul: {
            std::vector<Expression> fs;
            for (const auto& k : base.node().kids) fs.push_back(pow(k, n));
            return mul(std::move(fs));
        }
        case NodeKind::ExpI:
            return expi(static_cast<int>(base.node().freq[0] * n), static_cast<int>(base.node().freq[1] * n));
        default:
            return raw_pow(base, n);
    }
}

Expression rpow(const Expression& base, const Rational& p) {
    if (is_integer(p)) return pow(base, p.numerator());
    switch (base.kind()) {
        case NodeKind::Const: {
            const complex v = base.node().value;
            if (v == complex(0.0, 0.0)) {
                if (p < 0) throw DomainError("division by zero: 0 raised to a negative power");
                return zero_expr();
            }
            if (v.imag() == 0.0 && v.real() > 0.0) return make_const(std::pow(v.real(), to_double(p)));
            return make_const(std::pow(v, to_double(p)));
        }
        case NodeKind::AbsXi:
            return raw_rpow(base, p);
        case NodeKind::Pow:
        case NodeKind::RPow: {
            const Expression& inner = base.node().kids[0];
            if (inner.kind() != NodeKind::AbsXi) return raw_rpow(base, p);
            const Rational e = base.kind() == NodeKind::Pow ? Rational(base.node().ipow) : base.node().rpow;
            return rpow(inner, e * p);
        }
        case NodeKind::Mul: {
            // Positive constants and powers of |ξ| may be pulled out of a principal power.
            std::vector<Expression> outside;
            std::vector<Expression> inside;
            for (const auto& k : base.node().kids) {
                const bool positive_const = k.is_constant() && k.node().value.imag() == 0.0 && k.node().value.real() > 0.0;
                const bool radial = k.kind() == NodeKind::AbsXi ||
                                    ((k.kind() == NodeKind::Pow || k.kind() == NodeKind::RPow) &&
                                     k.node().kids[0].kind() == NodeKind::AbsXi);
                if (positive_const || radial) {
                    outside.push_back(rpow(k, p));
                } else {
                    inside.push_back(k);
                }
            }
            if (outside.empty()) return raw_rpow(base, p);
            if (!inside.empty()) outside.push_back(raw_rpow(mul(std::move(inside)), p));
            return mul(std::move(outside));
        }
        default:
            return raw_rpow(base, p);
    }
}

Expression log(const Expression& arg) {
    if (arg.is_constant()) {
        if (arg.node().value == complex(0.0, 0.0)) throw DomainError("log of zero");
        return make_const(std::log(arg.node().value));
    }
    return raw(NodeKind::Log, {arg});
}

Expression expi(int k1, int k2) {
    if (k1 == 0 && k2 == 0) return one_expr();
    Node n;
    n.kind = NodeKind::ExpI;
    n.freq = {k1, k2};
    return finish(std::move(n));
}

Expression abs_xi() {
    static const Expression a = [] {
        Node n;
        n.kind = NodeKind::AbsXi;
        return finish(std::move(n));
    }();
    return a;
}

Expression cos_x(int k, Var x) {
    const int k1 = x == Var::X1 ? k : 0;
    const int k2 = x == Var::X2 ? k : 0;
    return Expression(0.5) * (expi(k1, k2) + expi(-k1, -k2));
}

Expression sin_x(int k, Var x) {
    const int k1 = x == Var::X1 ? k : 0;
    const int k2 = x == Var::X2 ? k : 0;
    return Expression(complex(0.0, -0.5)) * (expi(k1, k2) - expi(-k1, -k2));
}

Expression lambda_integral(const Expression& f) {
    if (f.is_zero()) return zero_expr();
    std::vector<Expression> outside;
    std::vector<Expression> inside;
    if (f.kind() == NodeKind::Mul) {
        for (const auto& k : f.node().kids) (k.depends_on(Var::Lambda) ? inside : outside).push_back(k);
    } else if (f.depends_on(Var::Lambda)) {
        inside.push_back(f);
    }
    if (inside.empty()) throw UsageError("log transform of a lambda-independent function diverges");
    Expression integrand = inside.size() == 1 ? inside.front() : mul(inside);
    outside.push_back(raw(NodeKind::LamInt, {integrand}));
    return mul(std::move(outside));
}

namespace {

using Memo = std::unordered_map<const Node*, Expression>;

Expression diff_rec(const Expression& e, Var v, Memo& memo) {
    if (!e.depends_on(v)) return zero_expr();
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    const Node& n = e.node();
    Expression out;
    switch (n.kind) {
        case NodeKind::Const:
            out = zero_expr();
            break;
        case NodeKind::Variable:
            out = n.var == v ? one_expr() : zero_expr();
            break;
        case NodeKind::AbsXi:
            out = Expression::variable(v) * pow(e, -1);
            break;
        case NodeKind::Add: {
            std::vector<Expression> ts;
            for (const auto& k : n.kids) ts.push_back(diff_rec(k, v, memo));
            out = add(std::move(ts));
            break;
        }
        case NodeKind::Mul: {
            std::vector<Expression> ts;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                Expression d = diff_rec(n.kids[i], v, memo);
                if (d.is_zero()) continue;
                std::vector<Expression> fs = n.kids;
                fs[i] = d;
                ts.push_back(mul(std::move(fs)));
            }
            out = add(std::move(ts));
            break;
        }
        case NodeKind::Pow: {
            const Expression& b = n.kids[0];
            out = mul({Expression(static_cast<double>(n.ipow)), pow(b, n.ipow - 1), diff_rec(b, v, memo)});
            break;
        }
        case NodeKind::RPow: {
            const Expression& b = n.kids[0];
            out = mul({Expression(to_double(n.rpow)), rpow(b, n.rpow - Rational(1)), diff_rec(b, v, memo)});
            break;
        }
        case NodeKind::ExpI: {
            const int k = v == Var::X1 ? n.freq[0] : (v == Var::X2 ? n.freq[1] : 0);
            out = Expression(complex(0.0, static_cast<double>(k))) * e;
            break;
        }
        case NodeKind::Log: {
            const Expression& b = n.kids[0];
            out = diff_rec(b, v, memo) * pow(b, -1);
            break;
        }
        case NodeKind::LamInt:
            out = lambda_integral(diff_rec(n.kids[0], v, memo));
            break;
    }
    memo.emplace(e.get(), out);
    return out;
}

Expression subst_rec(const Expression& e, Var v, const Expression& value, Memo& memo) {
    if (!e.depends_on(v)) return e;
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    const Node& n = e.node();
    Expression out;
    switch (n.kind) {
        case NodeKind::Variable:
            out = n.var == v ? value : e;
            break;
        case NodeKind::AbsXi:
            throw UsageError("cannot substitute a covariable inside |xi|");
        case NodeKind::Add: {
            std::vector<Expression> ts;
            for (const auto& k : n.kids) ts.push_back(subst_rec(k, v, value, memo));
            out = add(std::move(ts));
            break;
        }
        case NodeKind::Mul: {
            std::vector<Expression> ts;
            for (const auto& k : n.kids) ts.push_back(subst_rec(k, v, value, memo));
            out = mul(std::move(ts));
            break;
        }
        case NodeKind::Pow:
            out = pow(subst_rec(n.kids[0], v, value, memo), n.ipow);
            break;
        case NodeKind::RPow:
            out = rpow(subst_rec(n.kids[0], v, value, memo), n.rpow);
            break;
        case NodeKind::ExpI: {
            // Only constant real x values can be pushed into exp(i k x).
            auto c = value.constant_value();
            if (!c) throw UsageError("cannot substitute a non-constant into exp(i k x)");
            const int k = v == Var::X1 ? n.freq[0] : n.freq[1];
            const int k1 = v == Var::X1 ? 0 : n.freq[0];
            const int k2 = v == Var::X2 ? 0 : n.freq[1];
            out = Expression(std::exp(complex(0.0, static_cast<double>(k)) * *c)) * expi(k1, k2);
            break;
        }
        case NodeKind::Log:
            out = log(subst_rec(n.kids[0], v, value, memo));
            break;
        case NodeKind::LamInt:
            out = v == Var::Lambda ? e : lambda_integral(subst_rec(n.kids[0], v, value, memo));
            break;
        case NodeKind::Const:
            out = e;
            break;
    }
    memo.emplace(e.get(), out);
    return out;
}

}  // namespace

Expression differentiate(const Expression& e, Var v) {
    Memo memo;
    return diff_rec(e, v, memo);
}

Expression differentiate(const Expression& e, Var v, int times) {
    Expression out = e;
    for (int i = 0; i < times && !out.is_zero(); ++i) out = differentiate(out, v);
    return out;
}

Expression substitute(const Expression& e, Var v, const Expression& value) {
    Memo memo;
    return subst_rec(e, v, value, memo);
}

// ---------------------------------------------------------------- text form

std::string format_number(double v) {
    if (!std::isfinite(v)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    // Short rationals print exactly when the double round-trips.
    double x = std::fabs(v);
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 40; ++it) {
        const double a = std::floor(x);
        const long long ai = static_cast<long long>(a);
        const long long h2 = ai * h1 + h0;
        const long long k2 = ai * k1 + k0;
        if (k2 > 1000000) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double approx = static_cast<double>(h1) / static_cast<double>(k1);
        if (approx == std::fabs(v)) {
            return (v < 0 ? "-" : "") + std::to_string(h1) + "/" + std::to_string(k1);
        }
        const double frac = x - a;
        if (frac == 0.0) break;
        x = 1.0 / frac;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(complex c) {
    if (c.imag() == 0.0) return format_number(c.real());
    return "(c " + format_number(c.real()) + " " + format_number(c.imag()) + ")";
}

namespace {

void print_rec(const Expression& e, std::string& out, std::size_t limit) {
    if (out.size() > limit) return;
    const Node& n = e.node();
    auto list = [&](const char* head) {
        out += '(';
        out += head;
        for (const auto& k : n.kids) {
            out += ' ';
            print_rec(k, out, limit);
        }
    };
    switch (n.kind) {
        case NodeKind::Const:
            out += format_complex(n.value);
            return;
        case NodeKind::Variable:
            out += var_name(n.var);
            return;
        case NodeKind::AbsXi:
            out += "absxi";
            return;
        case NodeKind::Add:
            list("add");
            break;
        case NodeKind::Mul:
            list("mul");
            break;
        case NodeKind::Pow:
            list("pow");
            out += ' ' + std::to_string(n.ipow);
            break;
        case NodeKind::RPow:
            list("rpow");
            out += ' ' + to_string(n.rpow);
            break;
        case NodeKind::ExpI:
            out += "(expi " + std::to_string(n.freq[0]);
            if (n.freq[1] != 0) out += ' ' + std::to_string(n.freq[1]);
            break;
        case NodeKind::Log:
            list("log");
            break;
        case NodeKind::LamInt:
            list("lamint");
            break;
    }
    out += ')';
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expression parse_all() {
        Expression e = parse();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw UsageError("expression parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string atom() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')')
            ++pos_;
        if (start == pos_) fail("expected an atom");
        return std::string(s_.substr(start, pos_ - start));
    }

    static std::optional<double> number(const std::string& a) {
        const auto slash = a.find('/');
        if (slash != std::string::npos) {
            try {
                std::size_t i = 0, j = 0;
                const long long p = std::stoll(a.substr(0, slash), &i);
                const long long q = std::stoll(a.substr(slash + 1), &j);
                if (i != slash || j != a.size() - slash - 1 || q == 0) return std::nullopt;
                return static_cast<double>(p) / static_cast<double>(q);
            } catch (...) {
                return std::nullopt;
            }
        }
        char* end = nullptr;
        const double v = std::strtod(a.c_str(), &end);
        if (end == a.c_str() || *end != '\0') return std::nullopt;
        return v;
    }

    long long integer() {
        const std::string a = atom();
        try {
            std::size_t i = 0;
            const long long v = std::stoll(a, &i);
            if (i != a.size()) fail("expected an integer, got '" + a + "'");
            return v;
        } catch (const UsageError&) {
            throw;
        } catch (...) {
            fail("expected an integer, got '" + a + "'");
        }
    }

    Expression parse() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (s_[pos_] == ')') fail("unexpected ')'");
        if (s_[pos_] != '(') {
            const std::string a = atom();
            if (auto v = parse_var(a)) return Expression::variable(*v);
            if (a == "absxi") return abs_xi();
            if (a == "i") return Expression(complex(0.0, 1.0));
            if (a == "pi") return Expression(M_PI);
            if (auto v = number(a)) return Expression(*v);
            fail("unknown atom '" + a + "'");
        }
        ++pos_;
        const std::string head = atom();
        Expression out;
        if (head == "add" || head == "mul") {
            std::vector<Expression> kids;
            while (!at_close()) kids.push_back(parse());
            out = head == "add" ? add(std::move(kids)) : mul(std::move(kids));
        } else if (head == "pow") {
            Expression b = parse();
            out = pow(b, integer());
        } else if (head == "rpow") {
            Expression b = parse();
            out = rpow(b, parse_rational(atom()));
        } else if (head == "sqrt") {
            out = rpow(parse(), Rational(1, 2));
        } else if (head == "expi") {
            const int k1 = static_cast<int>(integer());
            const int k2 = at_close() ? 0 : static_cast<int>(integer());
            out = expi(k1, k2);
        } else if (head == "cos" || head == "sin") {
            const int k = static_cast<int>(integer());
            const std::string a = atom();
            auto v = parse_var(a);
            if (!v || (*v != Var::X1 && *v != Var::X2)) fail("cos/sin need an x variable");
            out = head == "cos" ? cos_x(k, *v) : sin_x(k, *v);
        } else if (head == "log") {
            out = log(parse());
        } else if (head == "lamint") {
            out = lambda_integral(parse());
        } else if (head == "neg") {
            out = -parse();
        } else if (head == "sub") {
            Expression a = parse();
            out = a - parse();
        } else if (head == "div") {
            Expression a = parse();
            out = a / parse();
        } else if (head == "c") {
            auto re = number(atom());
            auto im = number(atom());
            if (!re || !im) fail("(c re im) needs two numbers");
            out = Expression(complex(*re, *im));
        } else {
            fail("unknown operator '" + head + "'");
        }
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
        ++pos_;
        return out;
    }

    bool at_close() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        return s_[pos_] == ')';
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string to_prefix(const Expression& e) { return to_prefix(e, std::string::npos); }

std::string to_prefix(const Expression& e, std::size_t max_chars) {
    std::string out;
    print_rec(e, out, max_chars);
    if (out.size() > max_chars) {
        out.resize(max_chars);
        out += "...";
    }
    return out;
}

Expression parse_prefix(std::string_view text) { return Parser(text).parse_all(); }

Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        std::size_t i = 0;
        if (slash == std::string::npos) {
            const long long p = std::stoll(text, &i);
            if (i != text.size()) throw UsageError("");
            return Rational(p);
        }
        const long long p = std::stoll(text.substr(0, slash), &i);
        if (i != slash) throw UsageError("");
        std::size_t j = 0;
        const long long q = std::stoll(text.substr(slash + 1), &j);
        if (j != text.size() - slash - 1 || q == 0) throw UsageError("");
        return Rational(p, q);
    } catch (...) {
        throw UsageError("not a rational number: '" + text + "'");
    }
}

}  // namespace qtrace::sym
