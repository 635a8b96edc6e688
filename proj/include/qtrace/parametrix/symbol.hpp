#pragma once

#include "qtrace/parametrix/differential_operator.hpp"
#include "qtrace/symexpr/rational.hpp"

#include <string>
#include <vector>

namespace qtrace::param {

using sym::Rational;

/// One piece g(x, ξ) · Π_b (p_b − λ)^{−exps[b]} of a parametrix term.
struct Piece {
    std::vector<int> exps;
    Expression coeff;

    int nu() const;
};

/// Structural certificate of a piece: resolvent count ν and coefficient degree r.
struct Certificate {
    int nu = 0;
    Rational r{0};
};

/// Quasi-homogeneous term of degree `degree` (weights ξ:1, λ:m) kept in the
/// structured form Σ pieces over a shared list of resolvent bases p_b(x, ξ).
/// λ-independent symbols use pieces with ν = 0 and no bases.
class ParamTerm {
public:
    ParamTerm() = default;
    ParamTerm(Rational degree, int m, int dim) : degree_(degree), m_(m), dim_(dim) {}

    static ParamTerm lambda_free(const Expression& e, Rational degree, int dim);
    static ParamTerm resolvent(const Expression& principal, int m, int dim);
    /// Empty term over the given resolvent bases; fill with add_piece.
    static ParamTerm over(std::vector<Expression> bases, Rational degree, int m, int dim);

    const Rational& degree() const { return degree_; }
    int m() const { return m_; }
    int dim() const { return dim_; }
    const std::vector<Expression>& bases() const { return bases_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    bool is_zero() const { return pieces_.empty(); }
    bool lambda_independent() const;
    int min_nu() const;
    int max_nu() const;
    std::vector<Certificate> certificates() const;
    /// Least r over pieces; the ξ-integrability threshold compares it with −n.
    Rational min_r() const;

    /// Σ g Π (p_b − λ)^{−e_b} as a plain expression.
    Expression to_expression() const;

    ParamTerm derivative(sym::Var v) const;
    ParamTerm scaled(const Expression& c) const;
    ParamTerm operator+(const ParamTerm& o) const;
    ParamTerm operator-(const ParamTerm& o) const;
    ParamTerm operator*(const ParamTerm& o) const;

    void add_piece(std::vector<int> exps, const Expression& coeff);
    std::string to_prefix() const;

    /// Re-expresses the term over a larger basis list (indices into `merged`).
    ParamTerm rebased(const std::vector<Expression>& merged) const;

private:
    Rational degree_{0};
    int m_ = 0;
    int dim_ = 1;
    std::vector<Expression> bases_;
    std::vector<Piece> pieces_;
};

/// Ordered term list t_j of degree order − j, j = 0..depth.
class ParamSymbol {
public:
    ParamSymbol() = default;
    ParamSymbol(Rational order, int m, int dim) : order_(order), m_(m), dim_(dim) {}

    const Rational& order() const { return order_; }
    int m() const { return m_; }
    int dim() const { return dim_; }
    int depth() const { return static_cast<int>(terms_.size()) - 1; }
    /// True when the listed terms are the whole symbol (finite, exact).
    bool complete() const { return complete_; }
    void set_complete(bool c) { complete_ = c; }

    const std::vector<ParamTerm>& terms() const { return terms_; }
    /// Term j, or a zero term when j lies beyond a complete symbol.
    ParamTerm term(int j) const;
    bool has_term(int j) const;
    void push_back(ParamTerm t) { terms_.push_back(std::move(t)); }
    void set_term(int j, ParamTerm t);

    const std::vector<std::string>& warnings() const { return warnings_; }
    void warn(const std::string& w);

    ParamSymbol operator-(const ParamSymbol& o) const;

    std::string to_prefix() const;

private:
    Rational order_{0};
    int m_ = 0;
    int dim_ = 1;
    bool complete_ = false;
    std::vector<ParamTerm> terms_;
    std::vector<std::string> warnings_;
};

/// Classical λ-independent symbol: terms of degree σ − j.
class PolyhomSymbol {
public:
    PolyhomSymbol() = default;
    PolyhomSymbol(Rational order, int dim) : order_(order), dim_(dim) {}

    static PolyhomSymbol constant(const Expression& c, int dim);
    static PolyhomSymbol from_operator(const DifferentialOperator& p);
    /// Terms listed by descending degree order, order − 1, ...; complete by default.
    static PolyhomSymbol from_terms(Rational order, int dim, const std::vector<Expression>& terms, bool complete = true);

    const Rational& order() const { return order_; }
    int dim() const { return dim_; }
    bool complete() const { return complete_; }
    void set_complete(bool c) { complete_ = c; }
    int depth() const { return static_cast<int>(terms_.size()) - 1; }

    const std::vector<Expression>& terms() const { return terms_; }
    /// Term of degree order − j (zero if past the end of a complete symbol).
    Expression term(int j) const;
    /// Term of the given degree, zero if none exists.
    Expression term_of_degree(const Rational& degree) const;
    bool has_degree(const Rational& degree) const;
    void push_back(const Expression& e) { terms_.push_back(e); }

    const std::vector<std::string>& warnings() const { return warnings_; }
    void warn(const std::string& w) { warnings_.push_back(w); }

    ParamSymbol lift() const;
    static PolyhomSymbol from_param(const ParamSymbol& s);

    PolyhomSymbol operator-(const PolyhomSymbol& o) const;
    PolyhomSymbol scaled(const Expression& c) const;
    std::string to_prefix() const;

private:
    Rational order_{0};
    int dim_ = 1;
    bool complete_ = true;
    std::vector<Expression> terms_;
    std::vector<std::string> warnings_;
};

}  // namespace qtrace::param
