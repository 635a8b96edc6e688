#include "qtrace/symexpr/evaluate.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/numeric/quadrature.hpp"

#include <cmath>
#include <functional>
#include <unordered_map>

namespace qtrace::sym {

namespace {

constexpr std::uint32_t kAbsXiBit = 1u << kVarCount;

complex ipow(complex base, std::int64_t n) {
    if (n < 0) {
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

[[noreturn]] void division_by_zero(const Node* n) {
    // Rebuild a printable handle; the node is owned by the program's expression.
    std::string text = "<subexpression>";
    if (n != nullptr && !n->kids.empty()) text = to_prefix(n->kids.front(), 160);
    throw DomainError("division by zero: base " + text + " evaluates to 0");
}

}  // namespace

Point& Point::set(Var v, complex value) {
    values_[static_cast<std::size_t>(v)] = value;
    assigned_ |= 1u << static_cast<int>(v);
    return *this;
}

double Point::abs_xi() const {
    double s = 0.0;
    for (Var v : {Var::Xi1, Var::Xi2})
        if (has(v)) s += std::norm(get(v));
    return std::sqrt(s);
}

std::string Point::describe() const {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < kVarCount; ++i) {
        const Var v = static_cast<Var>(i);
        if (!has(v)) continue;
        if (!first) out += ", ";
        first = false;
        out += std::string(var_name(v)) + "=" + format_complex(get(v));
    }
    return out + "}";
}

Point Point::covariable(const std::array<double, 2>& xi, int dim) {
    Point p;
    p.set(Var::Xi1, xi[0]);
    if (dim > 1) p.set(Var::Xi2, xi[1]);
    return p;
}

Program::Program(const Expression& e) : expr_(e) {
    std::unordered_map<const Node*, int> slot;
    // Post-order compile; recursion depth follows expression nesting, which stays shallow.
    std::function<int(const Expression&)> emit = [&](const Expression& x) -> int {
        if (auto it = slot.find(x.get()); it != slot.end()) return it->second;
        const Node& n = x.node();
        std::vector<int> kids;
        if (n.kind != NodeKind::LamInt)
            for (const auto& k : n.kids) kids.push_back(emit(k));
        Instr ins;
        ins.kind = n.kind;
        ins.value = n.value;
        ins.ipow = n.ipow;
        ins.rpow = to_double(n.rpow);
        ins.freq = n.freq;
        ins.var = n.var;
        ins.node = &n;
        ins.first = static_cast<int>(operands_.size());
        ins.count = static_cast<int>(kids.size());
        operands_.insert(operands_.end(), kids.begin(), kids.end());
        if (n.kind == NodeKind::LamInt) {
            ins.sub = static_cast<int>(subs_.size());
            subs_.push_back(std::make_shared<const Program>(n.kids.front()));
        }
        code_.push_back(ins);
        const int id = static_cast<int>(code_.size()) - 1;
        slot.emplace(x.get(), id);
        return id;
    };
    emit(e);
    required_ = e.node().var_mask;
}

complex Program::operator()(const Point& p) const {
    const std::uint32_t plain = required_ & ~kAbsXiBit;
    const std::uint32_t missing = plain & ~p.assigned_mask();
    if (missing != 0) {
        for (int i = 0; i < kVarCount; ++i)
            if (missing & (1u << i))
                throw UsageError("unassigned variable '" + std::string(var_name(static_cast<Var>(i))) + "'");
    }
    if ((required_ & kAbsXiBit) && !p.has(Var::Xi1)) throw UsageError("|xi| needs covariables assigned");
    std::vector<complex> slots(code_.size());
    return run(p, slots);
}

complex Program::run(const Point& p, std::vector<complex>& s) const {
    const double axi = (required_ & kAbsXiBit) ? p.abs_xi() : 0.0;
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        const int* op = operands_.data() + in.first;
        complex r;
        switch (in.kind) {
            case NodeKind::Const:
                r = in.value;
                break;
            case NodeKind::Variable:
                r = p.get(in.var);
                break;
            case NodeKind::AbsXi:
                r = axi;
                break;
            case NodeKind::Add:
                r = 0.0;
                for (int k = 0; k < in.count; ++k) r += s[static_cast<std::size_t>(op[k])];
                break;
            case NodeKind::Mul:
                r = 1.0;
                for (int k = 0; k < in.count; ++k) r *= s[static_cast<std::size_t>(op[k])];
                break;
            case NodeKind::Pow: {
                const complex b = s[static_cast<std::size_t>(op[0])];
                if (in.ipow < 0 && b == complex(0.0, 0.0)) division_by_zero(in.node);
                r = ipow(b, in.ipow);
                break;
            }
            case NodeKind::RPow: {
                const complex b = s[static_cast<std::size_t>(op[0])];
                if (b == complex(0.0, 0.0)) {
                    if (in.rpow < 0) division_by_zero(in.node);
                    r = 0.0;
                } else if (b.imag() == 0.0 && b.real() > 0.0) {
                    r = std::pow(b.real(), in.rpow);
                } else {
                    r = std::pow(b, in.rpow);
                }
                break;
            }
            case NodeKind::ExpI: {
                complex phase = 0.0;
                if (in.freq[0] != 0) phase += static_cast<double>(in.freq[0]) * p.get(Var::X1);
                if (in.freq[1] != 0) phase += static_cast<double>(in.freq[1]) * p.get(Var::X2);
                r = std::exp(complex(0.0, 1.0) * phase);
                break;
            }
            case NodeKind::Log: {
                const complex b = s[static_cast<std::size_t>(op[0])];
                if (b == complex(0.0, 0.0)) throw DomainError("log of zero at " + p.describe());
                r = std::log(b);
                break;
            }
            case NodeKind::LamInt: {
                const Program& f = *subs_[static_cast<std::size_t>(in.sub)];
                Point q = p;
                auto res = num::integrate_negative_axis([&](double t) {
                    q.set(Var::Lambda, t);
                    return f(q);
                });
                r = -res.value;
                break;
            }
        }
        s[i] = r;
    }
    return s.back();
}

complex evaluate(const Expression& e, const Point& p) { return Program(e)(p); }

}  // namespace qtrace::sym
