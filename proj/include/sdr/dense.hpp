#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sdr/error.hpp"
#include "sdr/sparse_eigen.hpp"
#include "sdr/types.hpp"

namespace sdr {

/// Top-K eigenpairs of a symmetric matrix, eigenvalues descending,
/// each vector sign-canonicalized.
inline SparseBasis dense_eigen_topk(const Matrix& m, int k) {
    if (k < 1 || k > m.rows()) throw ParameterError("K out of range");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("eigen decomposition failed");
    const Eigen::Index p = m.rows();
    SparseBasis basis;
    basis.vectors = Matrix::Zero(p, k);
    basis.values = Vector::Zero(k);
    basis.converged.assign(static_cast<std::size_t>(k), true);
    basis.sparsity = static_cast<int>(p);
    basis.norm_kind = NormKind::Euclidean;
    for (int j = 0; j < k; ++j) {
        Vector v = es.eigenvectors().col(p - 1 - j);
        detail::canonicalize_sign(v);
        basis.vectors.col(j) = v;
        basis.values[j] = es.eigenvalues()[p - 1 - j];
    }
    return basis;
}

/// Top-K generalized eigenpairs of (m, sigma + ridge I) with sigma positive
/// definite after the ridge; vectors satisfy v' sigma v = 1.
inline SparseBasis dense_generalized_topk(const Matrix& m, const Matrix& sigma, int k,
                                          double ridge = 0.0) {
    if (k < 1 || k > m.rows()) throw ParameterError("K out of range");
    Matrix sig = sigma;
    if (ridge > 0.0) sig.diagonal().array() += ridge;
    Eigen::LLT<Matrix> llt(sig);
    if (llt.info() != Eigen::Success)
        throw NumericalError("covariance is singular; set a positive ridge");
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(m, sig);
    if (es.info() != Eigen::Success) throw NumericalError("generalized eigen decomposition failed");
    const Eigen::Index p = m.rows();
    SparseBasis basis;
    basis.vectors = Matrix::Zero(p, k);
    basis.values = Vector::Zero(k);
    basis.converged.assign(static_cast<std::size_t>(k), true);
    basis.sparsity = static_cast<int>(p);
    basis.norm_kind = NormKind::SigmaWeighted;
    for (int j = 0; j < k; ++j) {
        Vector v = es.eigenvectors().col(p - 1 - j);
        detail::canonicalize_sign(v);
        basis.vectors.col(j) = v;
        basis.values[j] = es.eigenvalues()[p - 1 - j];
    }
    return basis;
}

}  // namespace sdr
