#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sdr/error.hpp"
#include "sdr/rng.hpp"
#include "sdr/types.hpp"

namespace sdr {

enum class NormKind { Euclidean, SigmaWeighted };

enum class InitMode { SeededGaussian, TopColumn };

/// Ordered set of sparse direction estimates with their objective values.
struct SparseBasis {
    Matrix vectors;               // p x K
    Vector values;                // K, each beta_k' M beta_k against the undeflated matrix
    std::vector<bool> converged;  // per direction
    int sparsity = 0;
    NormKind norm_kind = NormKind::Euclidean;
    std::uint64_t seed = 0;  // recorded for reproducibility
};

struct IterationConfig {
    int sparsity = 0;
    int num_directions = 1;
    double tol = 1e-8;
    int max_iter = 1000;
    std::uint64_t seed = 0;
    InitMode init = InitMode::SeededGaussian;
    /// Candidate starts per direction; the best final objective wins. When
    /// more than one, the pool is anchored by the deterministic top-column
    /// candidate and filled with seeded Gaussian draws.
    int restarts = 1;
    /// Explicit p x K start vectors; overrides init/restarts when present.
    std::optional<Matrix> init_vectors;

    void validate(Eigen::Index p) const {
        if (sparsity < 1 || sparsity > p)
            throw ParameterError("sparsity must be in [1, " + std::to_string(p) + "], got " +
                                 std::to_string(sparsity));
        if (num_directions < 1 || num_directions > p)
            throw ParameterError("num_directions must be in [1, " + std::to_string(p) + "]");
        if (!(tol > 0.0)) throw ParameterError("tol must be positive");
        if (max_iter < 1) throw ParameterError("max_iter must be at least 1");
        if (restarts < 1) throw ParameterError("restarts must be at least 1");
        if (init_vectors && (init_vectors->rows() != p || init_vectors->cols() < num_directions))
            throw ParameterError("init_vectors must be p x K");
    }
};

/// Keeps the s entries of largest magnitude, zeroing the rest.
/// Ties at the cut are broken toward the lowest index.
inline Vector hard_threshold(const Vector& v, int s) {
    const Eigen::Index p = v.size();
    if (s < 1 || s > p)
        throw ParameterError("hard_threshold: s must be in [1, " + std::to_string(p) + "]");
    if (s == p) return v;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(p));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::partial_sort(idx.begin(), idx.begin() + s, idx.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          const double fa = std::abs(v[a]), fb = std::abs(v[b]);
                          if (fa != fb) return fa > fb;
                          return a < b;
                      });
    Vector out = Vector::Zero(p);
    for (int i = 0; i < s; ++i) out[idx[static_cast<std::size_t>(i)]] = v[idx[static_cast<std::size_t>(i)]];
    return out;
}

namespace detail {

inline Eigen::Index nonzero_count(const Vector& v) {
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) ++c;
    return c;
}

/// Flips the sign so the largest-magnitude entry (lowest index on ties) is
/// non-negative. Makes repeated runs comparable entry-for-entry.
inline void canonicalize_sign(Vector& v) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (v[arg] < 0.0) v = -v;
}

inline double sign_aware_distance(const Vector& a, const Vector& b) {
    return std::min((a - b).norm(), (a + b).norm());
}

/// Start candidates for one direction: explicit column if provided, otherwise
/// the configured mix of deterministic and seeded Gaussian starts.
inline std::vector<Vector> start_candidates(const Matrix& m, const IterationConfig& cfg,
                                            int direction) {
    std::vector<Vector> out;
    if (cfg.init_vectors) {
        out.push_back(cfg.init_vectors->col(direction));
        return out;
    }
    const bool with_top_column = cfg.init == InitMode::TopColumn || cfg.restarts > 1;
    if (with_top_column) {
        Eigen::Index best = 0;
        double best_norm = -1.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double nj = m.col(j).norm();
            if (nj > best_norm) {
                best_norm = nj;
                best = j;
            }
        }
        if (best_norm > 0.0) out.push_back(m.col(best));
    }
    const int wanted = std::max(cfg.restarts, 1);
    int draw = 0;
    while (static_cast<int>(out.size()) < wanted) {
        Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(direction),
                                       static_cast<std::uint64_t>(draw++)}));
        Vector v = rng.gaussian_vector(m.rows());
        if (v.norm() > 0.0) out.push_back(std::move(v));
    }
    if (out.empty()) throw NumericalError("no usable start vector");
    return out;
}

}  // namespace detail

struct PowerResult {
    Vector beta;
    double value = 0.0;  // beta' M beta for the matrix iterated on
    bool converged = false;
    int iterations = 0;
};

/// Power iteration interleaved with hard thresholding: the iterate is
/// multiplied by m, thresholded to s nonzeros whenever it is denser than
/// that, and renormalized. Stops when the iterate is stationary up to sign.
inline PowerResult truncated_power_vector(const Matrix& m, int s, const Vector& v0, double tol,
                                          int max_iter) {
    const Eigen::Index p = m.rows();
    if (v0.size() != p) throw DimensionError("start vector size mismatch");
    if (v0.norm() == 0.0) throw ParameterError("start vector must be nonzero");
    if (s < 1 || s > p) throw ParameterError("sparsity out of range");

    Vector v = v0 / v0.norm();
    PowerResult res;
    for (int t = 1; t <= max_iter; ++t) {
        Vector w = m * v;
        if (w.norm() < 1e-150)
            throw NumericalError("power iterate annihilated (M v = 0); retry with another start");
        if (detail::nonzero_count(w) > s) w = hard_threshold(w, s);
        w /= w.norm();
        const double diff = detail::sign_aware_distance(w, v);
        v = w;
        res.iterations = t;
        if (diff < tol) {
            res.converged = true;
            break;
        }
    }
    detail::canonicalize_sign(v);
    res.beta = v;
    res.value = v.dot(m * v);
    return res;
}

/// Extracts K sparse eigenvector estimates by running the truncated power
/// iteration on successively deflated copies of m. Each reported value is
/// computed against the original matrix, and that same value scales the
/// rank-one deflation step.
inline SparseBasis penalized_eigen_topk(const SymmetricMatrix& m, const IterationConfig& cfg) {
    const Eigen::Index p = m.dim();
    cfg.validate(p);
    const Matrix& original = m.values();
    Matrix deflated = original;

    SparseBasis basis;
    basis.vectors = Matrix::Zero(p, cfg.num_directions);
    basis.values = Vector::Zero(cfg.num_directions);
    basis.converged.assign(static_cast<std::size_t>(cfg.num_directions), false);
    basis.sparsity = cfg.sparsity;
    basis.norm_kind = NormKind::Euclidean;
    basis.seed = cfg.seed;

    for (int k = 0; k < cfg.num_directions; ++k) {
        PowerResult best;
        bool have = false;
        try {
            for (const Vector& v0 : detail::start_candidates(deflated, cfg, k)) {
                PowerResult r = truncated_power_vector(deflated, cfg.sparsity, v0, cfg.tol,
                                                       cfg.max_iter);
                if (!have || r.value > best.value) {
                    best = std::move(r);
                    have = true;
                }
            }
        } catch (const Error& e) {
            throw NumericalError("direction " + std::to_string(k) + ": " + e.what());
        }
        const double delta = best.beta.dot(original * best.beta);
        basis.vectors.col(k) = best.beta;
        basis.values[k] = delta;
        basis.converged[static_cast<std::size_t>(k)] = best.converged;
        deflated.noalias() -= delta * (best.beta * best.beta.transpose());
        deflated = symmetrized(deflated);
    }
    return basis;
}

}  // namespace sdr
