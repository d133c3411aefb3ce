#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "greylift/error.hpp"

namespace greylift::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace detail {

// First row whose Cholesky pivot is not positive. Only called after Eigen's
// LLT has already reported failure.
inline std::size_t failing_pivot(const Matrix& a) {
    const Eigen::Index n = a.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0)) return static_cast<std::size_t>(j);
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
        }
    }
    return static_cast<std::size_t>(n);
}

}  // namespace detail

// Lower Cholesky factor. Throws NumericalRankError naming the failing pivot.
inline Matrix cholesky_lower(const Matrix& a) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NumericalRankError("covariance matrix is not positive definite", detail::failing_pivot(a));
    }
    return llt.matrixL();
}

// F with a ~= F F^T from a symmetric eigendecomposition. Eigenvalues below
// rank_tol * lambda_max are dropped, so F may have fewer columns than rows.
// Throws when a is indefinite beyond neg_tol * lambda_max.
struct GaussianFactor {
    Matrix factor;
    std::size_t rank = 0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

inline GaussianFactor gaussian_factor(const Matrix& a, double rank_tol = 1e-14, double neg_tol = 1e-10) {
    GaussianFactor out;
    const Eigen::Index n = a.rows();
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) throw NumericalRankError("eigendecomposition failed", 0);
    const Vector& lam = es.eigenvalues();  // ascending
    out.min_eigenvalue = lam(0);
    out.max_eigenvalue = lam(n - 1);
    if (out.max_eigenvalue <= 0.0) {
        if (out.max_eigenvalue < 0.0) throw NumericalRankError("covariance matrix is negative definite", 0);
        out.factor = Matrix::Zero(n, 0);
        return out;
    }
    if (out.min_eigenvalue < -neg_tol * out.max_eigenvalue) {
        throw NumericalRankError("covariance matrix is indefinite", 0);
    }
    const double cut = rank_tol * out.max_eigenvalue;
    Eigen::Index first = 0;
    while (first < n && lam(first) <= cut) ++first;
    out.rank = static_cast<std::size_t>(n - first);
    out.factor = es.eigenvectors().rightCols(n - first) *
                 lam.tail(n - first).cwiseSqrt().asDiagonal();
    return out;
}

}  // namespace greylift::linalg
