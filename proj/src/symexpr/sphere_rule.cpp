#include "qtrace/symexpr/sphere_rule.hpp"

#include "qtrace/errors.hpp"

#include <cmath>
#include <numeric>

namespace qtrace::sym {

double SphereRule::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

SphereRule sphere_quadrature(int n, int degree, int norm_dim) {
    if (n != 1 && n != 2) throw UsageError("sphere quadrature supports n = 1 or 2, got " + std::to_string(n));
    if (degree < 1) throw UsageError("sphere quadrature degree must be at least 1");
    SphereRule rule;
    rule.dim = n;
    rule.norm_dim = norm_dim > 0 ? norm_dim : n;
    rule.normalization = std::pow(2.0 * M_PI, -rule.norm_dim);
    if (n == 1) {
        rule.nodes = {{1.0, 0.0}, {-1.0, 0.0}};
        rule.weights = {rule.normalization, rule.normalization};
        return rule;
    }
    const int count = degree + 1;
    for (int k = 0; k < count; ++k) {
        const double th = 2.0 * M_PI * k / count;
        rule.nodes.push_back({std::cos(th), std::sin(th)});
        rule.weights.push_back(2.0 * M_PI / count * rule.normalization);
    }
    return rule;
}

}  // namespace qtrace::sym
