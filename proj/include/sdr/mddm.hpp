#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <string>

#include "sdr/error.hpp"
#include "sdr/types.hpp"

namespace sdr {

/// n x n matrix of Euclidean distances between the rows of y.
inline Matrix pairwise_euclidean(const DataMatrix& y) {
    const Eigen::Index n = y.rows();
    const Matrix& v = y.values();
    Eigen::VectorXd sq = v.rowwise().squaredNorm();
    Matrix d = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * (v * v.transpose());
    d = d.cwiseMax(0.0).cwiseSqrt();
    d.diagonal().setZero();
    return symmetrized(d);
}

namespace detail {

/// Accumulates -(1/n^2) * Xc^T G Xc over row blocks of the distance matrix G,
/// so G is never materialized in full. Fixed block size and accumulation order
/// keep the result bit-for-bit reproducible.
inline Matrix mddm_accumulate(const Matrix& xc, const Matrix& y, Eigen::Index block) {
    const Eigen::Index n = xc.rows();
    const Eigen::Index p = xc.cols();
    Eigen::VectorXd sq = y.rowwise().squaredNorm();
    Matrix acc = Matrix::Zero(p, p);
    for (Eigen::Index start = 0; start < n; start += block) {
        const Eigen::Index b = std::min(block, n - start);
        Matrix g = sq.segment(start, b).replicate(1, n) + sq.transpose().replicate(b, 1) -
                   2.0 * (y.middleRows(start, b) * y.transpose());
        g = g.cwiseMax(0.0).cwiseSqrt();
        acc.noalias() += xc.middleRows(start, b).transpose() * (g * xc);
    }
    return acc * (-1.0 / (static_cast<double>(n) * static_cast<double>(n)));
}

}  // namespace detail

/// Sample conditional mean-dependence matrix of x given y:
///   -(1/n^2) sum_{j,k} (x_j - xbar)(x_k - xbar)^T ||y_j - y_k||.
/// Symmetric and positive semi-definite up to rounding.
inline SymmetricMatrix sample_mddm(const DataMatrix& x, const DataMatrix& y,
                                   Eigen::Index block = 256) {
    if (x.rows() != y.rows())
        throw DimensionError("row-count mismatch: x has " + std::to_string(x.rows()) +
                             ", y has " + std::to_string(y.rows()));
    Matrix xc = x.values().rowwise() - x.values().colwise().mean();
    Matrix m = detail::mddm_accumulate(xc, y.values(), block);
    return SymmetricMatrix(symmetrized(m), MatrixKind::Mddm);
}

/// Sample covariance with 1/n divisor, matching the centering convention above.
inline SymmetricMatrix sample_covariance(const DataMatrix& x) {
    const Eigen::Index n = x.rows();
    Matrix xc = x.values().rowwise() - x.values().colwise().mean();
    Matrix s = (xc.transpose() * xc) / static_cast<double>(n);
    return SymmetricMatrix(symmetrized(s), MatrixKind::Covariance);
}

}  // namespace sdr
