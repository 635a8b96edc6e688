#pragma once

#include "qtrace/symexpr/rational.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtrace::sym {

using complex = std::complex<double>;

/// Variables of the symbol calculus. Xi1/Xi2 are covariables; on the boundary
/// model Xi1 plays the tangential covariable.
enum class Var : std::uint8_t { X1 = 0, X2 = 1, Xi1 = 2, Xi2 = 3, Lambda = 4 };
inline constexpr int kVarCount = 5;

std::string_view var_name(Var v);
std::optional<Var> parse_var(std::string_view name);
inline Var x_var(int axis) { return axis == 0 ? Var::X1 : Var::X2; }
inline Var xi_var(int axis) { return axis == 0 ? Var::Xi1 : Var::Xi2; }

enum class NodeKind : std::uint8_t {
    Const,
    Variable,
    AbsXi,   // |ξ| over the assigned covariables
    Add,
    Mul,
    Pow,     // integer power, negative allowed
    RPow,    // rational power, principal branch
    ExpI,    // exp(i k·x)
    Log,     // principal branch
    LamInt,  // T[f] = -∫_{-∞}^0 f(t) dt with λ = t
};

class Node;

/// Immutable expression DAG. Construction applies light normalization only:
/// constant folding, flattening, like-term and like-base collection.
class Expression {
public:
    Expression();
    Expression(complex c);  // NOLINT(google-explicit-constructor)
    Expression(double c);   // NOLINT(google-explicit-constructor)
    Expression(int c);      // NOLINT(google-explicit-constructor)

    static Expression variable(Var v);
    static Expression rational(std::int64_t num, std::int64_t den);

    const Node& node() const { return *node_; }
    const Node* get() const { return node_.get(); }
    NodeKind kind() const;
    std::uint64_t hash() const;

    bool is_constant() const;
    bool is_zero() const;
    bool is_one() const;
    std::optional<complex> constant_value() const;

    bool depends_on(Var v) const;
    /// True when the variable itself occurs; |xi| does not count.
    bool mentions(Var v) const;
    bool depends_on_xi() const { return depends_on(Var::Xi1) || depends_on(Var::Xi2); }
    bool depends_on_x() const { return depends_on(Var::X1) || depends_on(Var::X2); }

    /// Number of distinct nodes in the DAG.
    std::size_t size() const;

    explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

private:
    std::shared_ptr<const Node> node_;
};

class Node {
public:
    NodeKind kind = NodeKind::Const;
    complex value{};
    Var var = Var::X1;
    std::int64_t ipow = 0;
    Rational rpow{0};
    std::array<int, 2> freq{0, 0};
    std::vector<Expression> kids;
    std::uint64_t hash = 0;
    std::uint32_t var_mask = 0;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression& operator+=(Expression& a, const Expression& b);
Expression& operator*=(Expression& a, const Expression& b);

Expression add(std::vector<Expression> terms);
Expression mul(std::vector<Expression> factors);
Expression pow(const Expression& base, std::int64_t n);
Expression rpow(const Expression& base, const Rational& p);
Expression log(const Expression& arg);
Expression expi(int k1, int k2 = 0);
Expression abs_xi();
Expression cos_x(int k, Var x);
Expression sin_x(int k, Var x);

/// T[f] node. Factors that do not depend on λ are pulled outside.
Expression lambda_integral(const Expression& f);

bool structurally_equal(const Expression& a, const Expression& b);

Expression differentiate(const Expression& e, Var v);
Expression differentiate(const Expression& e, Var v, int times);

/// Replaces variable v by `value`. Replacing covariables by constants also
/// resolves |ξ| numerically; any other substitution touching |ξ| is refused.
Expression substitute(const Expression& e, Var v, const Expression& value);

/// Prefix text form, e.g. (add (pow xi1 2) (mul -1 lam)).
std::string to_prefix(const Expression& e);
std::string to_prefix(const Expression& e, std::size_t max_chars);
Expression parse_prefix(std::string_view text);

std::string format_number(double v);
std::string format_complex(complex c);

}  // namespace qtrace::sym
