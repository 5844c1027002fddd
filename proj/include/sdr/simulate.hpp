#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>

#include "sdr/error.hpp"
#include "sdr/mddm.hpp"
#include "sdr/rng.hpp"
#include "sdr/types.hpp"

namespace sdr {

enum class ModelId { M1, M2, M3, M4, M5, M6, M7, M8, M9 };

enum class CovKind { Identity, Ar1 };

inline const char* to_string(ModelId id) {
    switch (id) {
        case ModelId::M1: return "M1";
        case ModelId::M2: return "M2";
        case ModelId::M3: return "M3";
        case ModelId::M4: return "M4";
        case ModelId::M5: return "M5";
        case ModelId::M6: return "M6";
        case ModelId::M7: return "M7";
        case ModelId::M8: return "M8";
        case ModelId::M9: return "M9";
    }
    return "?";
}

inline const char* to_string(CovKind k) {
    return k == CovKind::Identity ? "identity" : "ar1";
}

inline ModelId parse_model(const std::string& s) {
    for (ModelId id : {ModelId::M1, ModelId::M2, ModelId::M3, ModelId::M4, ModelId::M5,
                       ModelId::M6, ModelId::M7, ModelId::M8, ModelId::M9})
        if (s == to_string(id)) return id;
    throw ParameterError("unknown model id: " + s);
}

inline CovKind parse_cov(const std::string& s) {
    if (s == "identity") return CovKind::Identity;
    if (s == "ar1") return CovKind::Ar1;
    throw ParameterError("unknown covariance kind: " + s + " (expected identity|ar1)");
}

struct ModelSpec {
    ModelId id = ModelId::M1;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    CovKind cov = CovKind::Identity;
    std::uint64_t seed = 0;
};

struct GroundTruth {
    Matrix basis;  // p x K
    int num_directions() const { return static_cast<int>(basis.cols()); }
};

struct Dataset {
    DataMatrix x;
    DataMatrix y;
    GroundTruth truth;
};

/// First-order autoregressive correlation: entry (i, j) = rho^|i-j|.
inline SymmetricMatrix ar_covariance(Eigen::Index p, double rho) {
    if (!(std::abs(rho) < 1.0)) throw ParameterError("ar_covariance requires |rho| < 1");
    Matrix s(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) s(i, j) = std::pow(rho, std::abs(static_cast<double>(i - j)));
    return SymmetricMatrix(s, MatrixKind::Covariance);
}

/// n independent rows from N(0, sigma). Cholesky when positive definite,
/// eigen square root as the semidefinite fallback.
inline DataMatrix mvn_sample(Eigen::Index n, const SymmetricMatrix& sigma, std::uint64_t seed) {
    const Eigen::Index p = sigma.dim();
    Rng rng(seed);
    Matrix z = rng.gaussian_matrix(n, p);
    Eigen::LLT<Matrix> llt(sigma.values());
    if (llt.info() == Eigen::Success) {
        return DataMatrix(z * Matrix(llt.matrixL()).transpose());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.values());
    if (es.info() != Eigen::Success) throw NumericalError("covariance factorization failed");
    const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    Vector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < p; ++i) {
        if (lam[i] < -1e-10 * std::max(lmax, 1.0))
            throw NumericalError("covariance is not positive semi-definite");
        lam[i] = std::sqrt(std::max(lam[i], 0.0));
    }
    return DataMatrix(z * (es.eigenvectors() * lam.asDiagonal()).transpose());
}

/// P = B (B'B)^{-1} B'; requires full column rank.
inline Matrix projection_matrix(const Matrix& basis) {
    if (basis.cols() < 1) throw ParameterError("basis must have at least one column");
    Eigen::ColPivHouseholderQR<Matrix> qr(basis);
    if (qr.rank() < basis.cols()) throw ParameterError("basis is rank deficient");
    Matrix thin_q = qr.householderQ() * Matrix::Identity(basis.rows(), basis.cols());
    // Column pivoting permutes columns only; the span, hence P, is unchanged.
    return symmetrized(thin_q * thin_q.transpose());
}

/// Span distance ||P_bhat - P_b||_F / sqrt(2K), in [0, 1]; 0 iff equal spans.
inline double subspace_error(const Matrix& estimated, const Matrix& truth) {
    if (estimated.cols() != truth.cols())
        throw DimensionError("subspace_error: direction-count mismatch");
    if (estimated.rows() != truth.rows())
        throw DimensionError("subspace_error: ambient-dimension mismatch");
    const double k = static_cast<double>(truth.cols());
    const double d = (projection_matrix(estimated) - projection_matrix(truth)).norm() /
                     std::sqrt(2.0 * k);
    return std::min(d, 1.0);
}

namespace detail {

inline Vector support_vector(Eigen::Index p, Eigen::Index first, Eigen::Index last, double value) {
    Vector b = Vector::Zero(p);
    for (Eigen::Index i = first; i <= last; ++i) b[i] = value;
    return b;
}

inline void require_p(const ModelSpec& spec, Eigen::Index minimum) {
    if (spec.p < minimum)
        throw ParameterError(std::string(to_string(spec.id)) + " needs p >= " +
                             std::to_string(minimum) + ", got " + std::to_string(spec.p));
}

inline Matrix predictor_sample(const ModelSpec& spec, std::uint64_t seed) {
    if (spec.cov == CovKind::Identity) {
        Rng rng(seed);
        return rng.gaussian_matrix(spec.n, spec.p);
    }
    return mvn_sample(spec.n, ar_covariance(spec.p, 0.5), seed).values();
}

}  // namespace detail

/// Generates one replication of the named model together with its known
/// central-subspace basis. Sub-streams for the predictor noise, the error
/// terms, and the response are derived in a fixed order from the seed, so
/// the draws for one component never shift another's.
inline Dataset generate_dataset(const ModelSpec& spec) {
    if (spec.n < 2) throw ParameterError("need n >= 2");
    const std::uint64_t seed_x = derive_seed(spec.seed, {0});
    const std::uint64_t seed_eps = derive_seed(spec.seed, {1});
    const std::uint64_t seed_y = derive_seed(spec.seed, {2});
    const Eigen::Index n = spec.n;
    const Eigen::Index p = spec.p;
    const double inv_sqrt6 = 1.0 / std::sqrt(6.0);

    const bool forward_univariate =
        spec.id == ModelId::M1 || spec.id == ModelId::M2 || spec.id == ModelId::M3 ||
        spec.id == ModelId::M4 || spec.id == ModelId::M5;

    if (!forward_univariate && spec.cov != CovKind::Identity)
        throw ParameterError(std::string(to_string(spec.id)) +
                             " is defined with identity predictor covariance only");

    if (forward_univariate) {
        detail::require_p(spec, 12);
        Vector b1 = detail::support_vector(p, 0, 5, inv_sqrt6);
        Vector b2 = detail::support_vector(p, 5, 11, inv_sqrt6);  // shares index 6 with b1
        Matrix x = detail::predictor_sample(spec, seed_x);
        Rng eps_rng(seed_eps);
        Vector eps = eps_rng.gaussian_vector(n);
        Vector u1 = x * b1;
        Vector u2 = x * b2;
        Vector y(n);
        Matrix basis;
        switch (spec.id) {
            case ModelId::M1:
                y = u1.array() + u1.array().sin() + eps.array();
                basis = b1;
                break;
            case ModelId::M2:
                y = 2.0 * u1.array().atan() + 0.1 * u1.array().cube() + eps.array();
                basis = b1;
                break;
            case ModelId::M3:
                y = u1.array() / (0.5 + (1.5 + u2.array()).square()) + 0.2 * eps.array();
                basis = Matrix(p, 2);
                basis.col(0) = b1;
                basis.col(1) = b2;
                break;
            case ModelId::M4:
                y = u1.array() + u1.array() * u2.array() + 0.3 * eps.array();
                basis = Matrix(p, 2);
                basis.col(0) = b1;
                basis.col(1) = b2;
                break;
            default:  // M5
                y = u1.array().sign() * (u2.array() + 5.0).abs().log() + 0.2 * eps.array();
                basis = Matrix(p, 2);
                basis.col(0) = b1;
                basis.col(1) = b2;
                break;
        }
        return Dataset{DataMatrix(x), DataMatrix(y), GroundTruth{basis}};
    }

    switch (spec.id) {
        case ModelId::M6: {
            detail::require_p(spec, 12);
            Vector b1 = detail::support_vector(p, 0, 5, inv_sqrt6);
            Rng y_rng(seed_y);
            Vector y = y_rng.gaussian_vector(n);
            Rng eps_rng(seed_eps);
            Matrix x = (2.0 / 3.0) * (y.array().exp().matrix() * b1.transpose()) +
                       0.5 * eps_rng.gaussian_matrix(n, p);
            return Dataset{DataMatrix(x), DataMatrix(y), GroundTruth{Matrix(b1)}};
        }
        case ModelId::M7: {
            detail::require_p(spec, 3);
            Vector b1 = Vector::Zero(p);
            b1[0] = 1.0;
            Vector b2 = Vector::Zero(p);
            b2[1] = 2.0;
            b2[2] = 1.0;
            Matrix x = detail::predictor_sample(spec, seed_x);
            Matrix c = Matrix::Identity(4, 4);
            c(0, 1) = c(1, 0) = -0.5;
            Eigen::LLT<Matrix> llt(c);
            Rng eps_rng(seed_eps);
            Matrix eps = eps_rng.gaussian_matrix(n, 4) * Matrix(llt.matrixL()).transpose();
            Matrix y(n, 4);
            y.col(0) = x * b1 + eps.col(0);
            y.col(1) = x * b2 + eps.col(1);
            y.col(2) = eps.col(2);
            y.col(3) = eps.col(3);
            Matrix basis(p, 2);
            basis.col(0) = b1;
            basis.col(1) = b2;
            return Dataset{DataMatrix(x), DataMatrix(y), GroundTruth{basis}};
        }
        case ModelId::M8: {
            detail::require_p(spec, 2);
            Vector b = Vector::Zero(p);
            b[0] = 0.8;
            b[1] = 0.6;
            Matrix x = detail::predictor_sample(spec, seed_x);
            Vector u = x * b;
            Rng eps_rng(seed_eps);
            Matrix y(n, 4);
            // Fixed per-row draw order: e1, the partner of e2, e3, e4.
            for (Eigen::Index i = 0; i < n; ++i) {
                const double e1 = eps_rng.normal();
                const double partner = eps_rng.normal();
                const double e3 = eps_rng.normal();
                const double e4 = eps_rng.normal();
                double r = std::sin(u[i]);
                r = std::clamp(r, -0.999, 0.999);
                const double e2 = r * e1 + std::sqrt(1.0 - r * r) * partner;
                y(i, 0) = std::exp(e1);
                y(i, 1) = e2;
                y(i, 2) = e3;
                y(i, 3) = e4;
            }
            return Dataset{DataMatrix(x), DataMatrix(y), GroundTruth{Matrix(b)}};
        }
        case ModelId::M9: {
            detail::require_p(spec, 6);
            Vector b = detail::support_vector(p, 0, 5, inv_sqrt6);
            Rng y_rng(seed_y);
            Matrix y = y_rng.gaussian_matrix(n, 4);
            Vector f = (y.col(0).array().sin() / 3.0 + (2.0 / 3.0) * y.col(1).array().exp() +
                        y.col(2).array())
                           .matrix();
            Rng eps_rng(seed_eps);
            Matrix x = f * b.transpose() + eps_rng.gaussian_matrix(n, p);
            return Dataset{DataMatrix(x), DataMatrix(y), GroundTruth{Matrix(b)}};
        }
        default:
            throw ParameterError("unhandled model id");
    }
}

}  // namespace sdr
