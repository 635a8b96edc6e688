#include "qtrace/parametrix/symbol.hpp"

#include "qtrace/errors.hpp"

#include <algorithm>
#include <map>

namespace qtrace::param {

using sym::Var;

int Piece::nu() const {
    int s = 0;
    for (int e : exps) s += e;
    return s;
}

// ------------------------------------------------------------------ ParamTerm

ParamTerm ParamTerm::lambda_free(const Expression& e, Rational degree, int dim) {
    if (e.depends_on(Var::Lambda)) throw UsageError("lambda-free term depends on lam");
    ParamTerm t(degree, 0, dim);
    t.add_piece({}, e);
    return t;
}

ParamTerm ParamTerm::resolvent(const Expression& principal, int m, int dim) {
    ParamTerm t(Rational(-m), m, dim);
    t.bases_ = {principal};
    t.add_piece({1}, Expression(1));
    return t;
}

ParamTerm ParamTerm::over(std::vector<Expression> bases, Rational degree, int m, int dim) {
    ParamTerm t(degree, m, dim);
    t.bases_ = std::move(bases);
    return t;
}

bool ParamTerm::lambda_independent() const {
    for (const auto& p : pieces_)
        if (p.nu() != 0) return false;
    return true;
}

int ParamTerm::min_nu() const {
    int v = pieces_.empty() ? 0 : pieces_.front().nu();
    for (const auto& p : pieces_) v = std::min(v, p.nu());
    return v;
}

int ParamTerm::max_nu() const {
    int v = 0;
    for (const auto& p : pieces_) v = std::max(v, p.nu());
    return v;
}

std::vector<Certificate> ParamTerm::certificates() const {
    std::vector<Certificate> out;
    for (const auto& p : pieces_) out.push_back({p.nu(), degree_ + Rational(m_ * p.nu())});
    return out;
}

Rational ParamTerm::min_r() const {
    Rational r = degree_ + Rational(m_ * max_nu());
    for (const auto& c : certificates()) r = std::min(r, c.r);
    return r;
}

Expression ParamTerm::to_expression() const {
    std::vector<Expression> shifted;
    for (const auto& b : bases_) shifted.push_back(b - Expression::variable(Var::Lambda));
    std::vector<Expression> terms;
    for (const auto& p : pieces_) {
        std::vector<Expression> fs{p.coeff};
        for (std::size_t i = 0; i < p.exps.size(); ++i)
            if (p.exps[i] != 0) fs.push_back(sym::pow(shifted[i], -p.exps[i]));
        terms.push_back(sym::mul(std::move(fs)));
    }
    return sym::add(std::move(terms));
}

void ParamTerm::add_piece(std::vector<int> exps, const Expression& coeff) {
    if (coeff.is_zero()) return;
    exps.resize(bases_.size(), 0);
    for (auto& p : pieces_) {
        if (p.exps == exps) {
            p.coeff = p.coeff + coeff;
            if (p.coeff.is_zero()) pieces_.erase(pieces_.begin() + (&p - pieces_.data()));
            return;
        }
    }
    pieces_.push_back({std::move(exps), coeff});
}

ParamTerm ParamTerm::rebased(const std::vector<Expression>& merged) const {
    ParamTerm out(degree_, m_, dim_);
    out.bases_ = merged;
    std::vector<std::size_t> map;
    for (const auto& b : bases_) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const Expression& e) { return sym::structurally_equal(e, b); });
        if (it == merged.end()) throw UsageError("rebasing onto a list that misses a resolvent base");
        map.push_back(static_cast<std::size_t>(it - merged.begin()));
    }
    for (const auto& p : pieces_) {
        std::vector<int> e(merged.size(), 0);
        for (std::size_t i = 0; i < p.exps.size(); ++i) e[map[i]] += p.exps[i];
        out.add_piece(std::move(e), p.coeff);
    }
    return out;
}

namespace {

std::vector<Expression> merge_bases(const std::vector<Expression>& a, const std::vector<Expression>& b) {
    std::vector<Expression> out = a;
    for (const auto& e : b) {
        const bool present = std::any_of(out.begin(), out.end(), [&](const Expression& x) { return sym::structurally_equal(x, e); });
        if (!present) out.push_back(e);
    }
    return out;
}

int merged_m(int a, int b) {
    if (a != 0 && b != 0 && a != b) throw UsageError("terms with different resolvent orders cannot be combined");
    return a != 0 ? a : b;
}

}  // namespace

ParamTerm ParamTerm::derivative(Var v) const {
    ParamTerm out(degree_ - (v == Var::Xi1 || v == Var::Xi2 ? Rational(1) : Rational(0)), m_, dim_);
    out.bases_ = bases_;
    std::vector<Expression> dbase;
    for (const auto& b : bases_) dbase.push_back(sym::differentiate(b, v));
    for (const auto& p : pieces_) {
        out.add_piece(p.exps, sym::differentiate(p.coeff, v));
        for (std::size_t i = 0; i < bases_.size(); ++i) {
            if (p.exps[i] == 0 || dbase[i].is_zero()) continue;
            std::vector<int> e = p.exps;
            e[i] += 1;
            out.add_piece(std::move(e), Expression(static_cast<double>(-p.exps[i])) * p.coeff * dbase[i]);
        }
    }
    return out;
}

ParamTerm ParamTerm::scaled(const Expression& c) const {
    if (c.depends_on(Var::Lambda)) throw UsageError("scaling factor must be lambda-free");
    ParamTerm out(degree_, m_, dim_);
    out.bases_ = bases_;
    for (const auto& p : pieces_) out.add_piece(p.exps, c * p.coeff);
    return out;
}

ParamTerm ParamTerm::operator+(const ParamTerm& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (degree_ != o.degree_) throw UsageError("adding parametrix terms of different degrees");
    const auto merged = merge_bases(bases_, o.bases_);
    ParamTerm out = rebased(merged);
    out.m_ = merged_m(m_, o.m_);
    const ParamTerm rhs = o.rebased(merged);
    for (const auto& p : rhs.pieces_) out.add_piece(p.exps, p.coeff);
    return out;
}

ParamTerm ParamTerm::operator-(const ParamTerm& o) const { return *this + o.scaled(Expression(-1)); }

ParamTerm ParamTerm::operator*(const ParamTerm& o) const {
    const auto merged = merge_bases(bases_, o.bases_);
    const ParamTerm a = rebased(merged);
    const ParamTerm b = o.rebased(merged);
    ParamTerm out(degree_ + o.degree_, merged_m(m_, o.m_), std::max(dim_, o.dim_));
    out.bases_ = merged;
    for (const auto& p : a.pieces_)
        for (const auto& q : b.pieces_) {
            std::vector<int> e(merged.size(), 0);
            for (std::size_t i = 0; i < merged.size(); ++i) e[i] = p.exps[i] + q.exps[i];
            out.add_piece(std::move(e), p.coeff * q.coeff);
        }
    return out;
}

std::string ParamTerm::to_prefix() const {
    std::string out = "(term (degree " + sym::to_string(degree_) + ")";
    if (!bases_.empty()) {
        out += " (bases";
        for (const auto& b : bases_) out += " " + sym::to_prefix(b);
        out += ")";
    }
    for (const auto& p : pieces_) {
        out += "\n  (piece (nu " + std::to_string(p.nu()) + ") (r " +
               sym::to_string(degree_ + Rational(m_ * p.nu())) + ") (exps";
        for (int e : p.exps) out += " " + std::to_string(e);
        out += ") " + sym::to_prefix(p.coeff) + ")";
    }
    return out + ")";
}

// ---------------------------------------------------------------- ParamSymbol

ParamTerm ParamSymbol::term(int j) const {
    if (j >= 0 && j < static_cast<int>(terms_.size())) return terms_[static_cast<std::size_t>(j)];
    return ParamTerm(order_ - Rational(j), m_, dim_);
}

bool ParamSymbol::has_term(int j) const { return complete_ || (j >= 0 && j < static_cast<int>(terms_.size())); }

void ParamSymbol::set_term(int j, ParamTerm t) {
    if (j >= static_cast<int>(terms_.size())) {
        for (int k = static_cast<int>(terms_.size()); k <= j; ++k) terms_.emplace_back(order_ - Rational(k), m_, dim_);
    }
    terms_[static_cast<std::size_t>(j)] = std::move(t);
}

void ParamSymbol::warn(const std::string& w) {
    if (std::find(warnings_.begin(), warnings_.end(), w) == warnings_.end()) warnings_.push_back(w);
}

ParamSymbol ParamSymbol::operator-(const ParamSymbol& o) const {
    if (order_ != o.order_) throw UsageError("subtracting parametrized symbols of different orders");
    ParamSymbol out(order_, merged_m(m_, o.m_), std::max(dim_, o.dim_));
    const int n = std::max(depth(), o.depth());
    for (int j = 0; j <= n; ++j) out.push_back(term(j) - o.term(j));
    out.complete_ = complete_ && o.complete_;
    for (const auto& w : warnings_) out.warn(w);
    for (const auto& w : o.warnings_) out.warn(w);
    return out;
}

std::string ParamSymbol::to_prefix() const {
    std::string out = "(param-symbol (order " + sym::to_string(order_) + ") (m " + std::to_string(m_) + ") (dim " +
                      std::to_string(dim_) + ")";
    for (std::size_t j = 0; j < terms_.size(); ++j) out += "\n (j " + std::to_string(j) + " " + terms_[j].to_prefix() + ")";
    return out + ")";
}

// -------------------------------------------------------------- PolyhomSymbol

PolyhomSymbol PolyhomSymbol::constant(const Expression& c, int dim) {
    PolyhomSymbol s(Rational(0), dim);
    s.terms_.push_back(c);
    return s;
}

PolyhomSymbol PolyhomSymbol::from_operator(const DifferentialOperator& p) {
    PolyhomSymbol s(Rational(p.order()), p.dim());
    for (int d = p.order(); d >= 0; --d) s.terms_.push_back(p.symbol_part(d));
    return s;
}

PolyhomSymbol PolyhomSymbol::from_terms(Rational order, int dim, const std::vector<Expression>& terms, bool complete) {
    PolyhomSymbol s(order, dim);
    for (const auto& t : terms) {
        if (t.depends_on(Var::Lambda)) throw UsageError("classical symbol term depends on lam");
        if (dim == 1 && t.mentions(Var::Xi2)) throw UsageError("symbol uses xi2 on a one-dimensional torus");
    }
    s.terms_ = terms;
    s.complete_ = complete;
    return s;
}

Expression PolyhomSymbol::term(int j) const {
    if (j >= 0 && j < static_cast<int>(terms_.size())) return terms_[static_cast<std::size_t>(j)];
    return Expression(0);
}

Expression PolyhomSymbol::term_of_degree(const Rational& degree) const {
    const Rational j = order_ - degree;
    if (!sym::is_integer(j) || j < 0) return Expression(0);
    return term(static_cast<int>(j.numerator()));
}

bool PolyhomSymbol::has_degree(const Rational& degree) const {
    const Rational j = order_ - degree;
    return sym::is_integer(j) && j >= 0 && j.numerator() < static_cast<std::int64_t>(terms_.size()) &&
           !terms_[static_cast<std::size_t>(j.numerator())].is_zero();
}

ParamSymbol PolyhomSymbol::lift() const {
    ParamSymbol s(order_, 0, dim_);
    for (std::size_t j = 0; j < terms_.size(); ++j)
        s.push_back(ParamTerm::lambda_free(terms_[j], order_ - Rational(static_cast<std::int64_t>(j)), dim_));
    s.set_complete(complete_);
    for (const auto& w : warnings_) s.warn(w);
    return s;
}

PolyhomSymbol PolyhomSymbol::from_param(const ParamSymbol& s) {
    PolyhomSymbol out(s.order(), s.dim());
    for (const auto& t : s.terms()) {
        if (!t.lambda_independent()) throw UsageError("symbol still depends on lam");
        out.terms_.push_back(t.to_expression());
    }
    out.complete_ = s.complete();
    for (const auto& w : s.warnings()) out.warn(w);
    return out;
}

PolyhomSymbol PolyhomSymbol::operator-(const PolyhomSymbol& o) const {
    if (order_ != o.order_) throw UsageError("subtracting symbols of different orders");
    PolyhomSymbol out(order_, std::max(dim_, o.dim_));
    const int n = std::max(depth(), o.depth());
    for (int j = 0; j <= n; ++j) out.terms_.push_back(term(j) - o.term(j));
    out.complete_ = complete_ && o.complete_;
    return out;
}

PolyhomSymbol PolyhomSymbol::scaled(const Expression& c) const {
    PolyhomSymbol out = *this;
    for (auto& t : out.terms_) t = c * t;
    return out;
}

std::string PolyhomSymbol::to_prefix() const {
    std::string out = "(symbol (order " + sym::to_string(order_) + ") (dim " + std::to_string(dim_) + ")";
    for (std::size_t j = 0; j < terms_.size(); ++j)
        out += "\n (degree " + sym::to_string(order_ - Rational(static_cast<std::int64_t>(j))) + " " +
               sym::to_prefix(terms_[j]) + ")";
    return out + ")";
}

}  // namespace qtrace::param
