#pragma once

#include "qtrace/symexpr/expression.hpp"

#include <array>
#include <memory>
#include <vector>

namespace qtrace::sym {

/// Assignment of variables. |ξ| is derived from whichever covariables are set.
class Point {
public:
    Point& set(Var v, complex value);
    bool has(Var v) const { return (assigned_ >> static_cast<int>(v)) & 1u; }
    complex get(Var v) const { return values_[static_cast<std::size_t>(v)]; }
    std::uint32_t assigned_mask() const { return assigned_; }
    double abs_xi() const;
    std::string describe() const;

    static Point covariable(const std::array<double, 2>& xi, int dim);

private:
    std::array<complex, kVarCount> values_{};
    std::uint32_t assigned_ = 0;
};

/// Flattened evaluation tape. Shared subexpressions are evaluated once per call.
/// Evaluation is const and reentrant.
class Program {
public:
    explicit Program(const Expression& e);

    complex operator()(const Point& p) const;
    const Expression& expression() const { return expr_; }
    std::uint32_t required_vars() const { return required_; }

private:
    struct Instr {
        NodeKind kind;
        int first = 0;  // into operands_
        int count = 0;
        complex value{};
        std::int64_t ipow = 0;
        double rpow = 0.0;
        std::array<int, 2> freq{0, 0};
        Var var = Var::X1;
        int sub = -1;  // index into subs_ for LamInt
        const Node* node = nullptr;
    };

    complex run(const Point& p, std::vector<complex>& slots) const;

    Expression expr_;
    std::vector<Instr> code_;
    std::vector<int> operands_;
    std::vector<std::shared_ptr<const Program>> subs_;
    std::uint32_t required_ = 0;
};

complex evaluate(const Expression& e, const Point& p);

}  // namespace qtrace::sym
