#include "qtrace/symexpr/homogeneity.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/symexpr/evaluate.hpp"

#include <cmath>
#include <random>

namespace qtrace::sym {

HomogeneityReport homogeneity_check(const Expression& e, const Rational& degree, int dim, int m, int samples,
                                    double tol, std::uint64_t seed) {
    HomogeneityReport rep;
    rep.tol = tol;
    rep.samples = samples;
    Program prog(e);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double d = to_double(degree);
    for (int s = 0; s < samples; ++s) {
        Point base;
        base.set(Var::X1, 2.0 * M_PI * unit(rng));
        base.set(Var::X2, 2.0 * M_PI * unit(rng));
        const double radius = 0.5 + 1.5 * unit(rng);
        std::array<double, 2> xi{0.0, 0.0};
        if (dim == 1) {
            xi[0] = (unit(rng) < 0.5 ? -1.0 : 1.0) * radius;
        } else {
            const double th = 2.0 * M_PI * unit(rng);
            xi = {radius * std::cos(th), radius * std::sin(th)};
        }
        base.set(Var::Xi1, xi[0]);
        if (dim > 1) base.set(Var::Xi2, xi[1]);
        const double mag = 0.2 + 2.8 * unit(rng);
        const complex lam = (s % 2 == 0) ? complex(-mag, 0.0)
                                         : std::polar(mag, M_PI * (0.6 + 0.4 * unit(rng)));
        base.set(Var::Lambda, lam);
        const double t = 0.5 + 3.5 * unit(rng);
        Point scaled = base;
        scaled.set(Var::Xi1, t * xi[0]);
        if (dim > 1) scaled.set(Var::Xi2, t * xi[1]);
        scaled.set(Var::Lambda, lam * std::pow(t, m));
        complex v0, v1;
        try {
            v0 = prog(base);
            v1 = prog(scaled);
        } catch (const DomainError& err) {
            throw DomainError(std::string(err.what()) + " at sample " + base.describe());
        }
        const complex expect = std::pow(t, d) * v0;
        const double scale = std::max(std::abs(expect), std::abs(v1));
        const double dev = scale == 0.0 ? 0.0 : std::abs(v1 - expect) / scale;
        if (!(dev <= rep.max_rel_deviation)) {
            rep.max_rel_deviation = std::isnan(dev) ? INFINITY : dev;
            rep.worst_point = base.describe() + " t=" + format_number(t);
        }
    }
    rep.pass = rep.max_rel_deviation <= tol;
    return rep;
}

}  // namespace qtrace::sym
