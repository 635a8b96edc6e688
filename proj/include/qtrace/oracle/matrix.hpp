#pragma once

#include "qtrace/parametrix/differential_operator.hpp"

#include <Eigen/Dense>

#include <string>

namespace qtrace::oracle {

using sym::complex;
using sym::Expression;

/// Operator restricted to the Fourier modes |k|_∞ ≤ K on T¹ or T².
struct TruncatedOperator {
    int dim = 1;
    int K = 0;
    Eigen::MatrixXcd matrix;
    std::string description;
    int bandwidth = 0;  // largest x-frequency of the symbol

    int modes() const { return static_cast<int>(matrix.rows()); }
};

/// Number of retained modes, (2K+1)^dim.
int mode_count(int dim, int K);
/// Row index of the mode k (k[1] ignored on T¹).
int mode_index(int dim, int K, int k1, int k2 = 0);

/// Left quantization Op(a)u = Σ_k a(x, k) û_k e^{ikx}: entry (k + j, k) is the x-Fourier
/// coefficient j of a(·, k). Exact when a is a trigonometric polynomial in x of degree
/// ≤ max_x_degree. Refuses symbols that are not, and cutoffs below the bandwidth.
TruncatedOperator build_matrix(const Expression& symbol, int dim, int K, int max_x_degree = 16);
TruncatedOperator build_matrix(const param::DifferentialOperator& p, int K);

/// Central block on |k| ≤ K of an operator assembled at a larger cutoff.
TruncatedOperator truncate(const TruncatedOperator& t, int K);

/// Op(a) Op(b) on |k| ≤ K, multiplied at a padded cutoff so retained entries are exact.
TruncatedOperator product(const Expression& a, const Expression& b, int dim, int K, int max_x_degree = 16);

/// [Op(a), Op(b)] on |k| ≤ K.
TruncatedOperator commutator(const Expression& a, const Expression& b, int dim, int K, int max_x_degree = 16);

}  // namespace qtrace::oracle
