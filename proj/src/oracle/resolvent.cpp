#include "qtrace/oracle/resolvent.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/numeric/quadrature.hpp"
#include "qtrace/symexpr/evaluate.hpp"

#include <Eigen/Eigenvalues>

#include <limits>
#include <sstream>

namespace qtrace::oracle {

namespace {

constexpr double kMinRcond = 1e-13;

void require_compatible(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (a.dim != b.dim || a.K != b.K) throw UsageError("operators were assembled on different mode sets");
}

Eigen::PartialPivLU<Eigen::MatrixXcd> factor(const TruncatedOperator& p, complex lambda) {
    Eigen::MatrixXcd m = p.matrix;
    m.diagonal().array() -= lambda;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    // the rcond estimate misses exact zero pivots, so the pivot ratio is checked too
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double ratio = pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0;
    const double rc = std::min(lu.rcond(), ratio);
    if (!(rc > kMinRcond)) {
        const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(p.matrix, false);
        complex nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double dist = std::abs(es.eigenvalues()(i) - lambda);
            if (dist < best) {
                best = dist;
                nearest = es.eigenvalues()(i);
            }
        }
        std::ostringstream os;
        os << "lambda = " << sym::format_complex(lambda) << " is (numerically) an eigenvalue; nearest eigenvalue "
           << sym::format_complex(nearest) << ", reciprocal condition " << rc;
        throw SpectralCollision(os.str(), nearest.real(), nearest.imag());
    }
    return lu;
}

}  // namespace

complex resolvent_trace(const TruncatedOperator& a, const TruncatedOperator& p, complex lambda) {
    return resolvent_power_trace(a, p, lambda, 1);
}

complex resolvent_power_trace(const TruncatedOperator& a, const TruncatedOperator& p, complex lambda, int power) {
    require_compatible(a, p);
    if (power < 1) throw UsageError("resolvent power must be at least 1");
    const auto lu = factor(p, lambda);
    Eigen::MatrixXcd x = a.matrix;
    for (int i = 0; i < power; ++i) x = lu.solve(x);
    return x.trace();
}

complex difference_trace(const TruncatedOperator& a, const TruncatedOperator& p1, const TruncatedOperator& p2,
                         complex lambda) {
    require_compatible(a, p1);
    require_compatible(a, p2);
    const auto lu1 = factor(p1, lambda);
    const auto lu2 = factor(p2, lambda);
    const Eigen::MatrixXcd w = lu2.solve(a.matrix);
    const Eigen::MatrixXcd z = lu1.solve(p2.matrix - p1.matrix);
    return w.cwiseProduct(z.transpose()).sum();
}

TraceProblem::Assembled TraceProblem::assemble(int K) const {
    Assembled m;
    if (kind == "commutator") {
        m.a = commutator(a, a_prime, dim, K);
    } else {
        m.a = build_matrix(a, dim, K);
    }
    m.p = build_matrix(p, dim, K);
    if (kind == "difference") m.p2 = build_matrix(p2, dim, K);
    return m;
}

complex TraceProblem::evaluate(const Assembled& m, complex lambda) const {
    if (kind == "resolvent" || kind == "commutator") return resolvent_power_trace(m.a, m.p, lambda, power);
    if (kind == "difference") return difference_trace(m.a, m.p, m.p2, lambda);
    throw UsageError("unknown trace kind '" + kind + "'");
}

TraceEstimate trace_with_estimate(const TraceProblem& prob, complex lambda, int K, int K_ref) {
    if (K_ref <= K) throw UsageError("reference cutoff must exceed the working cutoff");
    TraceEstimate e;
    e.K = K;
    e.K_ref = K_ref;
    e.value = prob.evaluate(prob.assemble(K), lambda);
    e.reference = prob.evaluate(prob.assemble(K_ref), lambda);
    e.truncation = std::abs(e.value - e.reference);
    return e;
}

}  // namespace qtrace::oracle

namespace qtrace::oracle {

complex lattice_trace(const Expression& a, const Expression& p, complex lambda, int K, int power) {
    if (a.depends_on_x() || p.depends_on_x()) throw UsageError("lattice trace needs x-independent symbols");
    if (power < 1) throw UsageError("resolvent power must be at least 1");
    return lattice_sum(a * sym::pow(p - Expression::variable(sym::Var::Lambda), -power), lambda, K);
}

complex lattice_sum(const Expression& summand, complex lambda, int K, bool skip_zero) {
    using sym::Var;
    if (summand.depends_on_x()) throw UsageError("lattice summand must not depend on x");
    if (summand.mentions(Var::Xi2)) throw UsageError("lattice sums run over one frequency axis");
    if (K < 1) throw UsageError("lattice cutoff must be at least 1");
    const Expression term = sym::substitute(summand, Var::Lambda, Expression(lambda));
    const sym::Program f(term);
    const sym::Program d1(sym::differentiate(term, Var::Xi1));
    const sym::Program d3(sym::differentiate(term, Var::Xi1, 3));
    auto at = [](const sym::Program& g, double k) { return g(sym::Point().set(Var::Xi1, k)); };

    complex sum = 0;
    for (int k = -K; k <= K; ++k)
        if (k != 0 || !skip_zero) sum += at(f, k);
    // midpoint Euler–Maclaurin: Σ_{k>K} f(k) = ∫_{K+½}^∞ f + f′(K+½)/24 − 7f‴(K+½)/5760 + …
    for (double sign : {1.0, -1.0}) {
        auto g = [&](double s) { return at(f, sign * s); };
        const double c = K + 0.5;
        const auto tail = num::integrate_power_tail(g, c);
        sum += tail.value + sign * at(d1, sign * c) / 24.0 - sign * 7.0 * at(d3, sign * c) / 5760.0;
    }
    return sum;
}

double power_trace_consistency(const TruncatedOperator& a, const TruncatedOperator& p, complex lambda, int power) {
    require_compatible(a, p);
    if (power < 2) return 0.0;
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(p.matrix, false);
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) dist = std::min(dist, std::abs(es.eigenvalues()(i) - lambda));
    const double r = 0.5 * dist;
    constexpr int nodes = 64;
    complex coeff = 0;
    for (int j = 0; j < nodes; ++j) {
        const complex w = std::polar(1.0, 2 * M_PI * j / nodes);
        coeff += resolvent_trace(a, p, lambda + r * w) / std::pow(r * w, power - 1);
    }
    coeff /= double(nodes);
    const complex direct = resolvent_power_trace(a, p, lambda, power);
    return std::abs(direct - coeff) / std::max(std::abs(direct), 1e-300);
}

}  // namespace qtrace::oracle
