#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sdr/error.hpp"
#include "sdr/sparse_eigen.hpp"
#include "sdr/types.hpp"

namespace sdr {

struct GepConfig : IterationConfig {
    /// Gradient step size. Values near 1/lambda_max(Sigma) or below keep the
    /// Rayleigh ascent stable; larger values can cycle between iterates and
    /// end with the non-converged flag set.
    double step_size = 1.0;
    /// Added to the diagonal of Sigma before iterating; escape hatch for
    /// singular covariances when n << p.
    double ridge = 0.0;

    void validate_gep(Eigen::Index p) const {
        validate(p);
        if (!(step_size > 0.0)) throw ParameterError("step_size must be positive");
        if (ridge < 0.0) throw ParameterError("ridge must be non-negative");
    }
};

struct RifleResult {
    Vector beta;  // Euclidean-unit, at most s nonzeros
    bool converged = false;
    int iterations = 0;
    double rayleigh = 0.0;    // beta' M beta / beta' Sigma beta at exit
    bool nonpos_rho = false;  // a non-positive quotient was seen along the way
};

/// One generalized-eigenvector estimate via truncated Rayleigh ascent:
///   rho   = v' M v / v' Sigma v
///   v     <- (I + (eta/rho) (M - rho Sigma)) v, renormalized
///   v     <- HT(v, s), renormalized
/// Stops when the iterate is stationary up to sign. A non-positive quotient
/// is recorded and iteration continues (deflated matrices are indefinite);
/// a vanishing denominator aborts with advice to use a ridge.
inline RifleResult rifle_vector(const Matrix& m, const Matrix& sigma, const GepConfig& cfg,
                                const Vector& v0) {
    static constexpr double kDenominatorFloor = 1e-12;
    const Eigen::Index p = m.rows();
    if (sigma.rows() != p || sigma.cols() != p) throw DimensionError("Sigma dimension mismatch");
    if (v0.size() != p) throw DimensionError("start vector size mismatch");
    if (v0.norm() == 0.0) throw ParameterError("start vector must be nonzero");

    Vector v = v0 / v0.norm();
    RifleResult res;
    for (int t = 1; t <= cfg.max_iter; ++t) {
        const double den = v.dot(sigma * v);
        if (den <= kDenominatorFloor)
            throw NumericalError(
                "v' Sigma v vanished during iteration; Sigma is singular along the iterate, "
                "set ridge > 0");
        const double rho = v.dot(m * v) / den;
        if (rho <= 0.0) res.nonpos_rho = true;
        Vector w = v + (cfg.step_size / rho) * (m * v - rho * (sigma * v));
        const double wn = w.norm();
        if (wn < 1e-150) throw NumericalError("rayleigh step annihilated the iterate");
        w /= wn;
        w = hard_threshold(w, cfg.sparsity);
        const double hn = w.norm();
        if (hn < 1e-150) throw NumericalError("thresholding annihilated the iterate");
        w /= hn;
        const double diff = detail::sign_aware_distance(w, v);
        v = w;
        res.iterations = t;
        if (diff < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    detail::canonicalize_sign(v);
    res.beta = v;
    res.rayleigh = v.dot(m * v) / v.dot(sigma * v);
    return res;
}

/// K sparse generalized-eigenvector estimates of the pair (m, sigma).
/// Each direction is Sigma-normalized (beta' Sigma beta = 1), its value is
/// computed against the original m, and the deflation
///   M <- M - value * (Sigma beta)(Sigma beta)'
/// is symmetrized before the next direction.
inline SparseBasis rifle_topk(const SymmetricMatrix& m, const SymmetricMatrix& sigma,
                              const GepConfig& cfg) {
    const Eigen::Index p = m.dim();
    cfg.validate_gep(p);
    if (sigma.dim() != p) throw DimensionError("Sigma dimension mismatch");

    const Matrix& original = m.values();
    Matrix sig = sigma.values();
    if (cfg.ridge > 0.0) sig.diagonal().array() += cfg.ridge;
    Matrix deflated = original;

    SparseBasis basis;
    basis.vectors = Matrix::Zero(p, cfg.num_directions);
    basis.values = Vector::Zero(cfg.num_directions);
    basis.converged.assign(static_cast<std::size_t>(cfg.num_directions), false);
    basis.sparsity = cfg.sparsity;
    basis.norm_kind = NormKind::SigmaWeighted;
    basis.seed = cfg.seed;

    for (int k = 0; k < cfg.num_directions; ++k) {
        RifleResult best;
        bool have = false;
        try {
            for (const Vector& v0 : detail::start_candidates(deflated, cfg, k)) {
                RifleResult r = rifle_vector(deflated, sig, cfg, v0);
                if (!have || r.rayleigh > best.rayleigh) {
                    best = std::move(r);
                    have = true;
                }
            }
        } catch (const Error& e) {
            throw NumericalError("direction " + std::to_string(k) + ": " + e.what());
        }
        const double scale = best.beta.dot(sig * best.beta);
        if (scale <= 0.0)
            throw NumericalError("direction " + std::to_string(k) +
                                 ": Sigma-norm of the estimate is not positive");
        Vector beta = best.beta / std::sqrt(scale);
        detail::canonicalize_sign(beta);
        const double delta = beta.dot(original * beta);
        basis.vectors.col(k) = beta;
        basis.values[k] = delta;
        basis.converged[static_cast<std::size_t>(k)] = best.converged;
        Vector sb = sig * beta;
        deflated.noalias() -= delta * (sb * sb.transpose());
        deflated = symmetrized(deflated);
    }
    return basis;
}

}  // namespace sdr
