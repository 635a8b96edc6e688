#include "doctest.h"

#include "qtrace/errors.hpp"
#include "qtrace/oracle/resolvent.hpp"
#include "qtrace/oracle/spectrum.hpp"

#include <cmath>

using namespace qtrace;
using namespace qtrace::oracle;
using sym::parse_prefix;
using sym::Var;

namespace {

const Expression xi = Expression::variable(Var::Xi1);

double coth_sum(complex lambda) {
    const double s = std::sqrt(1.0 - lambda.real());
    return M_PI / std::tanh(M_PI * s) / s;
}

Expression squared(const std::string& potential) {
    const auto p = param::DifferentialOperator::from_symbol(parse_prefix("(add (pow xi1 2) " + potential + ")"), 1);
    return p.power(2).full_symbol();
}

}  // namespace

TEST_CASE("matrix examples") {
    const auto lap = build_matrix(xi * xi, 1, 2);
    CHECK(lap.modes() == 5);
    Eigen::VectorXcd diag(5);
    diag << 4, 1, 0, 1, 4;
    CHECK((lap.matrix - Eigen::MatrixXcd(diag.asDiagonal())).norm() < 1e-14);

    const auto c = build_matrix(sym::cos_x(1, Var::X1), 1, 3);
    CHECK(c.bandwidth == 1);
    CHECK((c.matrix - c.matrix.transpose()).norm() < 1e-14);
    for (int i = 0; i + 1 < c.modes(); ++i) {
        CHECK(std::abs(c.matrix(i + 1, i) - 0.5) < 1e-14);
        CHECK(std::abs(c.matrix(i, i)) < 1e-14);
    }

    const auto d = build_matrix(sym::abs_xi(), 1, 4);
    for (int k = -4; k <= 4; ++k) CHECK(std::abs(d.matrix(k + 4, k + 4) - double(std::abs(k))) < 1e-14);
    CHECK((d.matrix - Eigen::MatrixXcd(d.matrix.diagonal().asDiagonal())).norm() < 1e-14);

    // e^{ix} raises the mode by one
    const auto e = build_matrix(sym::expi(1), 1, 3);
    CHECK(std::abs(e.matrix(mode_index(1, 3, 1), mode_index(1, 3, 0)) - 1.0) < 1e-14);
    CHECK(std::abs(e.matrix.sum() - 6.0) < 1e-13);

    const auto t2 = build_matrix(parse_prefix("(add (pow xi1 2) (pow xi2 2) (cos 1 x2))"), 2, 2);
    CHECK(t2.modes() == 25);
    CHECK(std::abs(t2.matrix(mode_index(2, 2, 1, -1), mode_index(2, 2, 1, -1)) - 2.0) < 1e-14);
    CHECK(std::abs(t2.matrix(mode_index(2, 2, 1, 0), mode_index(2, 2, 1, -1)) - 0.5) < 1e-14);
    CHECK(std::abs(t2.matrix(mode_index(2, 2, 2, -1), mode_index(2, 2, 1, -1))) < 1e-14);
}

TEST_CASE("matrix refusals") {
    CHECK_THROWS_AS(build_matrix(sym::cos_x(3, Var::X1), 1, 2), UsageError);
    CHECK_THROWS_AS(build_matrix(parse_prefix("(pow (add 2 (cos 1 x1)) -1)"), 1, 8), UsageError);
    CHECK_THROWS_AS(build_matrix(parse_prefix("(add (pow xi1 2) lam)"), 1, 4), UsageError);
    CHECK_THROWS_AS(build_matrix(Expression::variable(Var::Xi2), 1, 4), UsageError);
}

TEST_CASE("padded products are exact on retained modes") {
    const auto cc = product(sym::cos_x(1, Var::X1), sym::cos_x(1, Var::X1), 1, 4);
    const auto direct = build_matrix(parse_prefix("(add 0.5 (mul 0.5 (cos 2 x1)))"), 1, 4);
    CHECK((cc.matrix - direct.matrix).norm() < 1e-14);
    const auto comm = commutator(sym::expi(1), sym::abs_xi(), 1, 5);
    // [e^{ix}, |D|] e_k = (|k| − |k+1|) e_{k+1}
    CHECK(std::abs(comm.matrix(mode_index(1, 5, 3), mode_index(1, 5, 2)) + 1.0) < 1e-14);
    CHECK(std::abs(comm.matrix(mode_index(1, 5, -2), mode_index(1, 5, -3)) - 1.0) < 1e-14);
}

TEST_CASE("resolvent trace examples") {
    const Expression p = xi * xi + 1;
    CHECK(std::abs(lattice_trace(1, p, -1.0, 64) - coth_sum(-1.0)) < 1e-8);
    CHECK(std::abs(lattice_trace(1, p, -7.5, 16) - coth_sum(-7.5)) < 1e-8);

    const auto P = build_matrix(p, 1, 64);
    const auto I = build_matrix(Expression(1), 1, 64);
    const complex direct = resolvent_trace(I, P, -1.0);
    double tail = 0.0;
    for (int k = 65; k < 2000000; ++k) tail += 2.0 / (double(k) * k + 2.0);
    tail += 2.0 / 1999999.5;
    CHECK(std::abs(direct + tail - coth_sum(-1.0)) < 1e-6);

    TraceProblem tp;
    tp.p = p;
    const auto est = trace_with_estimate(tp, -1.0, 64, 128);
    CHECK(est.truncation > 0.01);
    CHECK(est.truncation < 0.02);

    const auto shift = build_matrix(sym::expi(1), 1, 16);
    CHECK(std::abs(resolvent_trace(shift, build_matrix(p, 1, 16), complex(-2.0, 1.0))) < 1e-15);

    const auto h = build_matrix(parse_prefix("(add (pow xi1 2) 2 (cos 1 x1))"), 1, 32);
    const auto a = build_matrix(parse_prefix("(add 1 (sin 1 x1))"), 1, 32);
    const complex real_trace = resolvent_trace(a, h, -3.0);
    CHECK(std::abs(real_trace.imag()) < 1e-14);
    CHECK(real_trace.real() > 0.0);
}

TEST_CASE("spectral collision names the nearest eigenvalue") {
    const auto P = build_matrix(xi * xi, 1, 8);
    const auto I = build_matrix(Expression(1), 1, 8);
    try {
        (void)resolvent_trace(I, P, 4.0);
        FAIL("expected a collision");
    } catch (const SpectralCollision& e) {
        CHECK(std::abs(e.nearest_re() - 4.0) < 1e-12);
        CHECK(std::abs(e.nearest_im()) < 1e-12);
    }
    CHECK_THROWS_AS(resolvent_trace(build_matrix(Expression(1), 1, 4), build_matrix(xi * xi, 1, 4), 0.0), SpectralCollision);
    CHECK_THROWS_AS(resolvent_trace(I, build_matrix(xi * xi, 1, 4), -1.0), UsageError);
}

TEST_CASE("resolvent powers") {
    const Expression p = xi * xi + 1;
    const auto P = build_matrix(p, 1, 64);
    const auto I = build_matrix(Expression(1), 1, 64);
    CHECK(std::abs(resolvent_power_trace(I, P, -1.0, 1) - resolvent_trace(I, P, -1.0)) < 1e-15);
    // d/dλ of the closed form by a five-point stencil against the tail-corrected square
    const double h = 1e-3;
    const double d = (-coth_sum(-1.0 + 2 * h) + 8 * coth_sum(-1.0 + h) - 8 * coth_sum(-1.0 - h) + coth_sum(-1.0 - 2 * h)) /
                     (12 * h);
    CHECK(std::abs(lattice_trace(1, p, -1.0, 64, 2) - d) < 1e-8);
    CHECK(power_trace_consistency(I, P, -1.0, 2) < 1e-6);
    const auto a = build_matrix(parse_prefix("(add 1 (cos 1 x1))"), 1, 32);
    const auto h2 = build_matrix(parse_prefix("(add (pow xi1 2) 2 (cos 1 x1))"), 1, 32);
    CHECK(power_trace_consistency(a, h2, complex(-2.0, 0.5), 3) < 1e-6);
}

TEST_CASE("cyclicity of the commutator trace") {
    const auto A = build_matrix(sym::expi(1), 1, 32);
    const auto Ap = build_matrix(sym::abs_xi(), 1, 32);
    const auto P = build_matrix(parse_prefix("(add (pow xi1 2) 2 (cos 1 x1))"), 1, 32);
    for (complex lambda : {complex(-1.0), complex(-10.0, 3.0), complex(-100.0)}) {
        Eigen::MatrixXcd m = P.matrix;
        m.diagonal().array() -= lambda;
        const Eigen::MatrixXcd q = m.inverse();
        const complex lhs = ((A.matrix * Ap.matrix - Ap.matrix * A.matrix) * q).trace();
        const complex rhs = (A.matrix * (Ap.matrix * q - q * Ap.matrix)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("zeta at zero examples") {
    const auto t1 = zeta_at_zero(SpectrumSpec::torus_laplacian(1, 0.0));
    CHECK(t1.nu0 == 1);
    CHECK(std::abs(t1.zeta0 + 1.0) < 1e-6);
    CHECK(std::abs(t1.c0) < 1e-6);

    const auto t2 = zeta_at_zero(SpectrumSpec::torus_laplacian(2, 1.0));
    CHECK(t2.nu0 == 0);
    CHECK(std::abs(t2.c0 + M_PI) < 1e-6);

    SpectrumSpec interval;
    std::vector<std::pair<double, int>> f;
    for (int k = 1; k <= 400; ++k) f.emplace_back(double(k) * k, 1);
    interval.factors = {f};
    interval.boundary = true;
    const auto iv = zeta_at_zero(interval);
    CHECK(iv.nu0 == 0);
    CHECK(std::abs(iv.zeta0 + 0.5) < 1e-6);

    const auto v = build_matrix(parse_prefix("(add (pow xi1 2) 2 (cos 1 x1))"), 1, 128);
    const auto c3 = zeta_at_zero(SpectrumSpec::from_matrix(v, 2));
    CHECK(c3.nu0 == 0);
    CHECK(std::abs(c3.c0) < 1e-3);
    CHECK(std::abs(c3.c0) < 1e-7);
}

TEST_CASE("zeta refusals") {
    // dropping the odd heat exponents on a manifold with boundary makes the fit drift
    auto cyl = dirichlet_product_spectrum({});
    cyl.boundary = false;
    CHECK_THROWS_AS(zeta_at_zero(cyl), OracleError);
    CHECK_THROWS_AS(SpectrumSpec::from_matrix(build_matrix(sym::expi(1), 1, 4), 2), UsageError);
    SpectrumSpec neg;
    neg.eigenvalues = {-1.0, 1.0};
    CHECK_THROWS_AS(zeta_at_zero(neg), UsageError);
}

TEST_CASE("cylinder product spectrum") {
    bdry::CylinderSpec flat;
    flat.mass2 = 0.0;
    const auto s0 = dirichlet_product_spectrum(flat);
    CHECK(std::abs(s0.smallest() - 1.0) < 1e-14);
    CHECK(s0.nullity() == 0);
    const auto z0 = zeta_at_zero(s0);
    CHECK(std::abs(z0.c0) < 1e-4);

    const auto z1 = zeta_at_zero(dirichlet_product_spectrum({}));
    CHECK(z1.nu0 == 0);
    CHECK(std::abs(z1.c0 + M_PI / 2) < 1e-3);

    bdry::CylinderSpec bad;
    bad.length = -1.0;
    CHECK_THROWS_AS(dirichlet_product_spectrum(bad), UsageError);
}

TEST_CASE("fit round trip and lattice asymptotics") {
    std::vector<complex> z, v;
    for (double mu : geometric_grid(1.0, 1e4, 30)) {
        z.emplace_back(mu);
        v.push_back(std::pow(mu, -0.5) + 2.0 / mu);
    }
    FitBasis b;
    b.exponents = {-0.5, -1.0};
    const auto f = fit_expansion(z, v, b);
    CHECK(std::abs(f.coefficient(-0.5) - 1.0) < 1e-9);
    CHECK(std::abs(f.coefficient(-1.0) - 2.0) < 1e-9);
    CHECK(f.residual < 1e-12);

    FitBasis lb;
    lb.exponents = {-0.5, -1.0, -1.5, -2.0, -2.5, -3.5};
    const auto g = fit_ray([](complex l) { return complex(coth_sum(l)); }, M_PI, 1e2, 1e5, 30, lb);
    CHECK(std::abs(g.coefficient(-0.5) - M_PI) < 1e-9);
    CHECK(std::abs(g.target()) < 1e-7);
    CHECK(g.stability < 1e-7);
    CHECK(fit_csv(z, v, f).find("abs_z,arg_z") == 0);

    FitBasis dup;
    dup.exponents = {-1.0, -1.0};
    CHECK_THROWS_AS(fit_expansion(z, v, dup), FitError);
    CHECK_THROWS_AS(fit_expansion({complex(1.0)}, {complex(1.0)}, b), FitError);
}

TEST_CASE("oracle fit for the fourth-order difference") {
    TraceProblem tp;
    tp.kind = "difference";
    tp.a = sym::abs_xi();
    tp.p = squared("3 (cos 1 x1)");
    tp.p2 = squared("2 (cos 1 x1)");
    const auto m = tp.assemble(64);
    FitBasis b;
    b.exponents = {0, -1, -1.5, -2, -2.5, -3};
    b.log_exponents = {-2};
    std::vector<complex> z, v;
    sample_ray([&](complex l) { return tp.evaluate(m, l); }, M_PI, geometric_grid(1e2, 1e5, 24), z, v);
    const auto f = fit_expansion(z, v, b);
    CHECK(std::abs(f.target() + 1.0) < 1e-3);
}

TEST_CASE("oracle commutator fits") {
    const Expression pot = parse_prefix("(cos 1 x1)");
    TraceProblem tp;
    tp.kind = "commutator";
    tp.a = sym::expi(1);
    tp.a_prime = sym::abs_xi();
    tp.p = squared("2 (cos 1 x1)");
    const auto plain = tp.assemble(64);
    CHECK(std::abs(tp.evaluate(plain, -50.0)) < 1e-12);

    tp.p = tp.p + sym::cos_x(1, Var::X1) * complex(0.0, -0.5) * xi * xi * xi;
    const auto odd = tp.assemble(64);
    FitBasis b;
    b.exponents = {0, -0.5, -1, -1.5, -2, -2.5, -3};
    b.log_exponents = {-1};
    std::vector<complex> z, v;
    sample_ray([&](complex l) { return tp.evaluate(odd, l); }, M_PI, geometric_grid(1e2, 1e5, 24), z, v);
    const auto f = fit_expansion(z, v, b);
    CHECK(std::abs(f.target() - complex(0.0, -0.125)) < 1e-3);
}
