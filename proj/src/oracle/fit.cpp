#include "qtrace/oracle/fit.hpp"

#include "qtrace/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qtrace::oracle {

namespace {

struct Solved {
    Eigen::VectorXcd coeffs;
    double condition = 0.0;
    double residual = 0.0;
};

complex zpow(complex z, double e) { return e == 0.0 ? complex(1.0) : std::exp(e * std::log(z)); }

Solved solve(const std::vector<complex>& z, const std::vector<complex>& v, const FitBasis& basis, double weight_exp) {
    const auto rows = static_cast<Eigen::Index>(z.size());
    const auto cols = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd m(rows, cols);
    Eigen::VectorXcd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const complex zi = z[static_cast<std::size_t>(i)];
        const double w = std::pow(std::abs(zi), -weight_exp);
        Eigen::Index c = 0;
        for (double e : basis.exponents) m(i, c++) = w * zpow(zi, e);
        for (double e : basis.log_exponents) m(i, c++) = w * std::log(zi) * zpow(zi, e);
        rhs(i) = w * v[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd scale(cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        scale(c) = m.col(c).norm();
        if (scale(c) == 0.0) scale(c) = 1.0;
        m.col(c) /= scale(c);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Solved out;
    out.condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
    Eigen::VectorXcd y = svd.solve(rhs);
    const double rn = rhs.norm();
    out.residual = rn > 0.0 ? (m * y - rhs).norm() / rn : (m * y - rhs).norm();
    out.coeffs = y.cwiseQuotient(scale.cast<complex>());
    return out;
}

std::size_t index_of(const std::vector<double>& v, double e) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i] - e) < 1e-12) return i;
    return v.size();
}

}  // namespace

std::string FitBasis::describe() const {
    std::ostringstream os;
    os << "z^{";
    for (std::size_t i = 0; i < exponents.size(); ++i) os << (i ? ", " : "") << exponents[i];
    os << "}";
    if (!log_exponents.empty()) {
        os << " + log(z) z^{";
        for (std::size_t i = 0; i < log_exponents.size(); ++i) os << (i ? ", " : "") << log_exponents[i];
        os << "}";
    }
    return os.str();
}

complex ExpansionFit::coefficient(double e) const {
    const auto i = index_of(basis.exponents, e);
    return i < coeffs.size() ? coeffs[i] : complex(0.0);
}

complex ExpansionFit::log_coefficient(double e) const {
    const auto i = index_of(basis.log_exponents, e);
    return i < log_coeffs.size() ? log_coeffs[i] : complex(0.0);
}

ExpansionFit fit_expansion(const std::vector<complex>& z, const std::vector<complex>& values, const FitBasis& basis,
                           const FitOptions& opt) {
    if (z.size() != values.size()) throw UsageError("fit needs one value per sample point");
    if (basis.size() == 0) throw UsageError("fit basis is empty");
    if (z.size() < basis.size() + 2) throw FitError("fit needs at least two more samples than basis members");
    for (complex zi : z)
        if (std::abs(zi) == 0.0) throw UsageError("fit sample at z = 0");

    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(z[a]) < std::abs(z[b]); });
    std::vector<complex> zs, vs;
    for (auto i : order) {
        zs.push_back(z[i]);
        vs.push_back(values[i]);
    }

    const Solved full = solve(zs, vs, basis, opt.weight_exponent);
    if (!(full.condition <= opt.max_condition)) {
        std::ostringstream os;
        os << "fit is ill-conditioned (condition " << full.condition << " > " << opt.max_condition
           << "); shrink the basis " << basis.describe() << " or widen the sample range";
        throw FitError(os.str());
    }

    ExpansionFit fit;
    fit.basis = basis;
    fit.residual = full.residual;
    fit.condition = full.condition;
    fit.target_exponent = opt.target_exponent;
    fit.samples = static_cast<int>(zs.size());
    fit.z_min = std::abs(zs.front());
    fit.z_max = std::abs(zs.back());
    fit.ray_angle = std::arg(-zs.front());
    Eigen::Index c = 0;
    for (std::size_t i = 0; i < basis.exponents.size(); ++i) fit.coeffs.push_back(full.coeffs(c++));
    for (std::size_t i = 0; i < basis.log_exponents.size(); ++i) fit.log_coeffs.push_back(full.coeffs(c++));

    const std::size_t part = (zs.size() * 2) / 3;
    const std::size_t t = index_of(basis.exponents, opt.target_exponent);
    if (t < basis.exponents.size() && part >= basis.size() + 2) {
        const std::vector<complex> zl(zs.begin(), zs.begin() + static_cast<long>(part));
        const std::vector<complex> vl(vs.begin(), vs.begin() + static_cast<long>(part));
        const std::vector<complex> zu(zs.end() - static_cast<long>(part), zs.end());
        const std::vector<complex> vu(vs.end() - static_cast<long>(part), vs.end());
        const auto lo = solve(zl, vl, basis, opt.weight_exponent);
        const auto hi = solve(zu, vu, basis, opt.weight_exponent);
        const auto ti = static_cast<Eigen::Index>(t);
        fit.stability = std::max(std::abs(lo.coeffs(ti) - full.coeffs(ti)), std::abs(hi.coeffs(ti) - full.coeffs(ti)));
    }
    return fit;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw UsageError("geometric grid needs 0 < lo < hi and two points");
    std::vector<double> g(static_cast<std::size_t>(count));
    const double r = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(r * i);
    return g;
}

void sample_ray(const std::function<complex(complex)>& f, double ray_angle, const std::vector<double>& mu,
                std::vector<complex>& z, std::vector<complex>& values) {
    z.clear();
    values.clear();
    for (double m : mu) {
        const complex lambda = std::polar(m, ray_angle);
        z.push_back(-lambda);
        values.push_back(f(lambda));
    }
}

}  // namespace qtrace::oracle

namespace qtrace::oracle {

complex evaluate_fit(const ExpansionFit& fit, complex z) {
    complex s = 0;
    for (std::size_t i = 0; i < fit.coeffs.size(); ++i) s += fit.coeffs[i] * zpow(z, fit.basis.exponents[i]);
    for (std::size_t i = 0; i < fit.log_coeffs.size(); ++i)
        s += fit.log_coeffs[i] * std::log(z) * zpow(z, fit.basis.log_exponents[i]);
    return s;
}

ExpansionFit fit_ray(const std::function<complex(complex)>& f, double ray_angle, double mu_lo, double mu_hi, int count,
                     const FitBasis& basis, const FitOptions& opt) {
    std::vector<complex> z, v;
    sample_ray(f, ray_angle, geometric_grid(mu_lo, mu_hi, count), z, v);
    ExpansionFit fit = fit_expansion(z, v, basis, opt);
    sample_ray(f, ray_angle, geometric_grid(2 * mu_lo, 2 * mu_hi, count), z, v);
    const ExpansionFit shifted = fit_expansion(z, v, basis, opt);
    fit.stability = std::abs(shifted.target() - fit.target());
    fit.ray_angle = ray_angle;
    return fit;
}

std::string fit_csv(const std::vector<complex>& z, const std::vector<complex>& values, const ExpansionFit& fit) {
    std::ostringstream os;
    os.precision(17);
    os << "abs_z,arg_z,value_re,value_im,fit_re,fit_im\n";
    for (std::size_t i = 0; i < z.size(); ++i) {
        const complex g = evaluate_fit(fit, z[i]);
        os << std::abs(z[i]) << ',' << std::arg(z[i]) << ',' << values[i].real() << ',' << values[i].imag() << ','
           << g.real() << ',' << g.imag() << '\n';
    }
    return os.str();
}

}  // namespace qtrace::oracle
