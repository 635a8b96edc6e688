#include "qtrace/oracle/matrix.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/symexpr/evaluate.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace qtrace::oracle {

namespace {

using sym::Point;
using sym::Program;
using sym::Var;

void check_dim(int dim) {
    if (dim != 1 && dim != 2) throw UsageError("oracle supports T^1 and T^2 only");
}

int wrap(int j, int n) { return ((j % n) + n) % n; }

/// Fourier coefficients c_{j} (|j| ≤ d per axis) of samples on an N^dim grid, N = 2d + 2.
/// Also returns the largest Nyquist-row magnitude, which is zero for trig polynomials of degree ≤ d.
struct Dft {
    int d;
    int n;
    std::vector<complex> twiddle;  // e^{-2πi m/n}

    explicit Dft(int degree) : d(degree), n(2 * degree + 2), twiddle(static_cast<std::size_t>(n)) {
        for (int m = 0; m < n; ++m) twiddle[static_cast<std::size_t>(m)] = std::polar(1.0, -2 * M_PI * m / n);
    }

    complex tw(int j, int s) const { return twiddle[static_cast<std::size_t>(wrap(j * s, n))]; }

    std::vector<complex> one(const std::vector<complex>& f, double& nyquist) const {
        std::vector<complex> c(static_cast<std::size_t>(2 * d + 1));
        for (int j = -d; j <= d; ++j) {
            complex acc = 0;
            for (int s = 0; s < n; ++s) acc += f[static_cast<std::size_t>(s)] * tw(j, s);
            c[static_cast<std::size_t>(j + d)] = acc / double(n);
        }
        complex ny = 0;
        for (int s = 0; s < n; ++s) ny += f[static_cast<std::size_t>(s)] * tw(d + 1, s);
        nyquist = std::abs(ny) / n;
        return c;
    }

    /// f indexed [s1 * n + s2]; result indexed [(j1 + d) * (2d+1) + (j2 + d)].
    std::vector<complex> two(const std::vector<complex>& f, double& nyquist) const {
        const int w = 2 * d + 1;
        std::vector<complex> half(static_cast<std::size_t>(n * (w + 1)));
        nyquist = 0;
        for (int s1 = 0; s1 < n; ++s1) {
            for (int j2 = -d; j2 <= d + 1; ++j2) {
                complex acc = 0;
                for (int s2 = 0; s2 < n; ++s2) acc += f[static_cast<std::size_t>(s1 * n + s2)] * tw(j2, s2);
                half[static_cast<std::size_t>(s1 * (w + 1) + j2 + d)] = acc / double(n);
            }
        }
        std::vector<complex> c(static_cast<std::size_t>(w * w));
        for (int j1 = -d; j1 <= d + 1; ++j1) {
            for (int j2 = -d; j2 <= d + 1; ++j2) {
                complex acc = 0;
                for (int s1 = 0; s1 < n; ++s1) acc += half[static_cast<std::size_t>(s1 * (w + 1) + j2 + d)] * tw(j1, s1);
                acc /= double(n);
                if (j1 == d + 1 || j2 == d + 1)
                    nyquist = std::max(nyquist, std::abs(acc));
                else
                    c[static_cast<std::size_t>((j1 + d) * w + j2 + d)] = acc;
            }
        }
        return c;
    }
};

}  // namespace

int mode_count(int dim, int K) {
    const int side = 2 * K + 1;
    return dim == 1 ? side : side * side;
}

int mode_index(int dim, int K, int k1, int k2) {
    return dim == 1 ? k1 + K : (k1 + K) * (2 * K + 1) + (k2 + K);
}

TruncatedOperator build_matrix(const Expression& symbol, int dim, int K, int max_x_degree) {
    check_dim(dim);
    if (K < 1) throw UsageError("mode cutoff must be at least 1");
    if (max_x_degree < 0) throw UsageError("x-degree bound must be nonnegative");
    if (symbol.depends_on(Var::Lambda)) throw UsageError("matrix symbol must not depend on lambda");
    if (dim == 1 && (symbol.mentions(Var::X2) || symbol.mentions(Var::Xi2)))
        throw UsageError("symbol uses second-axis variables on T^1");

    const Program prog(symbol);
    const Dft dft(max_x_degree);
    const int n = dft.n;
    const int d = max_x_degree;
    const int w = 2 * d + 1;
    const int modes = mode_count(dim, K);

    TruncatedOperator out;
    out.dim = dim;
    out.K = K;
    out.matrix = Eigen::MatrixXcd::Zero(modes, modes);
    out.description = sym::to_prefix(symbol, 160);

    std::vector<Point> grid;
    if (dim == 1) {
        for (int s = 0; s < n; ++s) grid.push_back(Point().set(Var::X1, 2 * M_PI * s / n));
    } else {
        for (int s1 = 0; s1 < n; ++s1)
            for (int s2 = 0; s2 < n; ++s2)
                grid.push_back(Point().set(Var::X1, 2 * M_PI * s1 / n).set(Var::X2, 2 * M_PI * s2 / n));
    }

    std::vector<complex> samples(grid.size());
    double scale = 0.0;
    double worst_nyquist = 0.0;
    int bandwidth = 0;
    std::vector<std::vector<complex>> columns(static_cast<std::size_t>(modes));

    const int k2_lo = dim == 1 ? 0 : -K;
    const int k2_hi = dim == 1 ? 0 : K;
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = k2_lo; k2 <= k2_hi; ++k2) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                Point p = grid[i];
                p.set(Var::Xi1, k1);
                if (dim == 2) p.set(Var::Xi2, k2);
                samples[i] = prog(p);
                if (!std::isfinite(samples[i].real()) || !std::isfinite(samples[i].imag())) {
                    std::ostringstream os;
                    os << "symbol is not finite at mode (" << k1 << ", " << k2 << ")";
                    throw DomainError(os.str());
                }
                scale = std::max(scale, std::abs(samples[i]));
            }
            double ny = 0.0;
            auto c = dim == 1 ? dft.one(samples, ny) : dft.two(samples, ny);
            worst_nyquist = std::max(worst_nyquist, ny);
            columns[static_cast<std::size_t>(mode_index(dim, K, k1, k2))] = std::move(c);
        }
    }
    if (worst_nyquist > 1e-10 * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "symbol is not a trigonometric polynomial in x of degree <= " << d;
        throw UsageError(os.str());
    }

    const double cut = 1e-14 * std::max(scale, 1.0);
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = k2_lo; k2 <= k2_hi; ++k2) {
            const int col = mode_index(dim, K, k1, k2);
            const auto& c = columns[static_cast<std::size_t>(col)];
            for (int j1 = -d; j1 <= d; ++j1) {
                for (int j2 = (dim == 1 ? 0 : -d); j2 <= (dim == 1 ? 0 : d); ++j2) {
                    const complex v = dim == 1 ? c[static_cast<std::size_t>(j1 + d)]
                                               : c[static_cast<std::size_t>((j1 + d) * w + j2 + d)];
                    if (std::abs(v) <= cut) continue;
                    bandwidth = std::max({bandwidth, std::abs(j1), std::abs(j2)});
                    const int r1 = k1 + j1;
                    const int r2 = k2 + j2;
                    if (std::abs(r1) > K || std::abs(r2) > K) continue;
                    out.matrix(mode_index(dim, K, r1, r2), col) = v;
                }
            }
        }
    }
    if (bandwidth > K) {
        std::ostringstream os;
        os << "mode cutoff K=" << K << " is below the symbol's x-bandwidth " << bandwidth;
        throw UsageError(os.str());
    }
    out.bandwidth = bandwidth;
    return out;
}

TruncatedOperator build_matrix(const param::DifferentialOperator& p, int K) {
    int degree = 0;
    for (int axis = 0; axis < p.dim(); ++axis) degree = std::max(degree, p.x_bandwidth(axis));
    return build_matrix(p.full_symbol(), p.dim(), K, degree);
}

TruncatedOperator truncate(const TruncatedOperator& t, int K) {
    if (K > t.K) throw UsageError("truncation cutoff exceeds the assembled cutoff");
    if (K == t.K) return t;
    TruncatedOperator out;
    out.dim = t.dim;
    out.K = K;
    out.description = t.description;
    out.bandwidth = t.bandwidth;
    const int modes = mode_count(t.dim, K);
    out.matrix.resize(modes, modes);
    if (t.dim == 1) {
        out.matrix = t.matrix.block(t.K - K, t.K - K, modes, modes);
        return out;
    }
    std::vector<int> map;
    map.reserve(static_cast<std::size_t>(modes));
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) map.push_back(mode_index(2, t.K, k1, k2));
    for (int c = 0; c < modes; ++c)
        for (int r = 0; r < modes; ++r) out.matrix(r, c) = t.matrix(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
    return out;
}

TruncatedOperator product(const Expression& a, const Expression& b, int dim, int K, int max_x_degree) {
    const int pad = build_matrix(b, dim, K, max_x_degree).bandwidth;
    const auto A = build_matrix(a, dim, K + pad, max_x_degree);
    const auto B = build_matrix(b, dim, K + pad, max_x_degree);
    TruncatedOperator ab = A;
    ab.matrix = A.matrix * B.matrix;
    ab.bandwidth = A.bandwidth + B.bandwidth;
    ab.description = "(" + A.description + ")(" + B.description + ")";
    return truncate(ab, K);
}

TruncatedOperator commutator(const Expression& a, const Expression& b, int dim, int K, int max_x_degree) {
    auto ab = product(a, b, dim, K, max_x_degree);
    const auto ba = product(b, a, dim, K, max_x_degree);
    ab.matrix -= ba.matrix;
    ab.description = "[" + sym::to_prefix(a, 80) + ", " + sym::to_prefix(b, 80) + "]";
    return ab;
}

}  // namespace qtrace::oracle
