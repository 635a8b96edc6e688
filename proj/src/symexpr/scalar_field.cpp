#include "qtrace/symexpr/scalar_field.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/symexpr/evaluate.hpp"

#include <cmath>

namespace qtrace::sym {

namespace {

double snap(double v) {
    if (std::fabs(v) < 1e-13) return 0.0;
    const double r = std::round(v * 1048576.0) / 1048576.0;
    return std::fabs(v - r) < 1e-13 ? r : v;
}

}  // namespace

ScalarField ScalarField::constant(int dim, complex c) {
    ScalarField f(dim);
    f.set({0, 0}, c);
    return f;
}

complex ScalarField::coefficient(const Freq& k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? complex(0.0, 0.0) : it->second;
}

void ScalarField::set(const Freq& k, complex c) {
    if (dim_ == 1 && k[1] != 0) throw UsageError("frequency in x2 for a one-dimensional field");
    if (c == complex(0.0, 0.0)) {
        coeffs_.erase(k);
    } else {
        coeffs_[k] = c;
    }
}

ScalarField ScalarField::from_expression(const Expression& e, int dim, int max_degree) {
    if (e.depends_on_xi() || e.depends_on(Var::Lambda))
        throw UsageError("coefficient expression must depend on x only: " + to_prefix(e, 120));
    if (dim == 1 && e.depends_on(Var::X2)) throw UsageError("coefficient uses x2 on a one-dimensional torus");
    Program prog(e);
    const int n = 2 * max_degree + 2;
    const int n2 = dim == 2 ? n : 1;
    std::vector<complex> samples(static_cast<std::size_t>(n * n2));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n2; ++b) {
            Point p;
            p.set(Var::X1, 2.0 * M_PI * a / n).set(Var::X2, 2.0 * M_PI * b / n);
            samples[static_cast<std::size_t>(a * n2 + b)] = prog(p);
        }
    ScalarField f(dim);
    const int d2 = dim == 2 ? max_degree : 0;
    for (int k1 = -max_degree; k1 <= max_degree; ++k1)
        for (int k2 = -d2; k2 <= d2; ++k2) {
            complex acc = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n2; ++b) {
                    const double ph = -2.0 * M_PI * (static_cast<double>(k1) * a / n + static_cast<double>(k2) * b / n);
                    acc += samples[static_cast<std::size_t>(a * n2 + b)] * std::polar(1.0, ph);
                }
            acc /= static_cast<double>(n * n2);
            f.set({k1, k2}, complex(snap(acc.real()), snap(acc.imag())));
        }
    // Reconstruction check off the sampling grid.
    for (int s = 1; s <= 5; ++s) {
        const double x1 = 0.37 * s + 0.11, x2 = 0.53 * s + 0.07;
        Point p;
        p.set(Var::X1, x1).set(Var::X2, x2);
        const complex want = prog(p);
        if (std::abs(f(x1, x2) - want) > 1e-10 * (1.0 + std::abs(want)))
            throw UsageError("coefficient is not a trigonometric polynomial of degree <= " +
                             std::to_string(max_degree) + ": " + to_prefix(e, 120));
    }
    return f;
}

complex ScalarField::operator()(double x1, double x2) const {
    complex acc = 0.0;
    for (const auto& [k, c] : coeffs_) acc += c * std::polar(1.0, k[0] * x1 + k[1] * x2);
    return acc;
}

Expression ScalarField::to_expression() const {
    std::vector<Expression> terms;
    for (const auto& [k, c] : coeffs_) terms.push_back(Expression(c) * expi(k[0], k[1]));
    return add(std::move(terms));
}

ScalarField ScalarField::derivative(int axis) const {
    ScalarField f(dim_);
    for (const auto& [k, c] : coeffs_) f.set(k, c * complex(0.0, static_cast<double>(k[static_cast<std::size_t>(axis)])));
    return f;
}

ScalarField ScalarField::operator+(const ScalarField& o) const {
    ScalarField f = *this;
    f.dim_ = std::max(dim_, o.dim_);
    for (const auto& [k, c] : o.coeffs_) f.set(k, f.coefficient(k) + c);
    return f;
}

ScalarField ScalarField::operator-(const ScalarField& o) const { return *this + o.scaled(-1.0); }

ScalarField ScalarField::operator*(const ScalarField& o) const {
    ScalarField f(std::max(dim_, o.dim_));
    for (const auto& [k, c] : coeffs_)
        for (const auto& [j, d] : o.coeffs_) {
            const Freq s{k[0] + j[0], k[1] + j[1]};
            f.set(s, f.coefficient(s) + c * d);
        }
    return f;
}

ScalarField ScalarField::scaled(complex c) const {
    ScalarField f(dim_);
    for (const auto& [k, v] : coeffs_) f.set(k, v * c);
    return f;
}

bool ScalarField::is_constant() const {
    for (const auto& kv : coeffs_)
        if (kv.first != Freq{0, 0}) return false;
    return true;
}

bool ScalarField::is_real(double tol) const {
    for (const auto& [k, c] : coeffs_)
        if (std::abs(coefficient({-k[0], -k[1]}) - std::conj(c)) > tol) return false;
    return true;
}

int ScalarField::degree(int axis) const {
    int d = 0;
    for (const auto& kv : coeffs_) d = std::max(d, std::abs(kv.first[static_cast<std::size_t>(axis)]));
    return d;
}

}  // namespace qtrace::sym
