#pragma once

#include <Eigen/Core>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdr/dense.hpp"
#include "sdr/error.hpp"
#include "sdr/mddm.hpp"
#include "sdr/rifle.hpp"
#include "sdr/sir.hpp"
#include "sdr/sparse_eigen.hpp"
#include "sdr/types.hpp"

namespace sdr {

enum class Method { EigenMddm, GepMddm, Sir, RifleSir, PrSir, OracleSir };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::EigenMddm: return "eigen-mddm";
        case Method::GepMddm: return "gep-mddm";
        case Method::Sir: return "sir";
        case Method::RifleSir: return "rifle-sir";
        case Method::PrSir: return "pr-sir";
        case Method::OracleSir: return "oracle-sir";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    for (Method m : {Method::EigenMddm, Method::GepMddm, Method::Sir, Method::RifleSir,
                     Method::PrSir, Method::OracleSir})
        if (s == to_string(m)) return m;
    throw ParameterError("unknown method: " + s);
}

struct FitOptions {
    int sparsity = 0;  // 0 means p (no sparsity constraint)
    int num_directions = 1;
    double step_size = 1.0;
    int slices = 10;
    std::uint64_t seed = 0;
    int restarts = 1;
    double ridge = 0.0;
    int n_proj = 0;  // 0 -> ceil(n log n)
    double tol = 1e-8;
    int max_iter = 1000;
    /// Replaces the sample covariance with the identity in gep-mddm / sir;
    /// the right call when the conditional predictor covariance is isotropic.
    bool identity_sigma = false;
    std::vector<Eigen::Index> support;  // oracle-sir only
    /// Explicit p x K start vectors for the iterative methods; overrides the
    /// seeded start pool.
    std::optional<Matrix> init_vectors;
};

struct FitResult {
    SparseBasis basis;
    Method method = Method::EigenMddm;
    double seconds = 0.0;
};

namespace detail {

inline Vector univariate_response(const DataMatrix& y, Method m) {
    if (y.cols() != 1)
        throw ParameterError(std::string(to_string(m)) +
                             " needs a univariate response; use pr-sir for multivariate");
    return y.values().col(0);
}

inline SymmetricMatrix covariance_or_identity(const DataMatrix& x, bool identity) {
    if (identity)
        return SymmetricMatrix(Matrix::Identity(x.cols(), x.cols()), MatrixKind::Covariance);
    return sample_covariance(x);
}

}  // namespace detail

/// One estimator invocation. Timing covers estimation only, not data loading.
inline FitResult fit(const DataMatrix& x, const DataMatrix& y, Method method,
                     const FitOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index p = x.cols();
    const int s = opts.sparsity == 0 ? static_cast<int>(p) : opts.sparsity;

    FitResult out;
    out.method = method;
    switch (method) {
        case Method::EigenMddm: {
            IterationConfig cfg;
            cfg.sparsity = s;
            cfg.num_directions = opts.num_directions;
            cfg.tol = opts.tol;
            cfg.max_iter = opts.max_iter;
            cfg.seed = opts.seed;
            cfg.restarts = opts.restarts;
            cfg.init_vectors = opts.init_vectors;
            out.basis = penalized_eigen_topk(sample_mddm(x, y), cfg);
            break;
        }
        case Method::GepMddm: {
            GepConfig cfg;
            cfg.sparsity = s;
            cfg.num_directions = opts.num_directions;
            cfg.tol = opts.tol;
            cfg.max_iter = opts.max_iter;
            cfg.seed = opts.seed;
            cfg.restarts = opts.restarts;
            cfg.step_size = opts.step_size;
            cfg.ridge = opts.ridge;
            cfg.init_vectors = opts.init_vectors;
            out.basis = rifle_topk(sample_mddm(x, y),
                                   detail::covariance_or_identity(x, opts.identity_sigma), cfg);
            break;
        }
        case Method::Sir: {
            SliceAssignment sl = slice_labels(detail::univariate_response(y, method), opts.slices);
            SymmetricMatrix m = sir_matrix(x, sl);
            if (opts.identity_sigma)
                out.basis = dense_eigen_topk(m.values(), opts.num_directions);
            else
                out.basis = dense_generalized_topk(m.values(), sample_covariance(x).values(),
                                                   opts.num_directions, opts.ridge);
            break;
        }
        case Method::RifleSir: {
            SliceAssignment sl = slice_labels(detail::univariate_response(y, method), opts.slices);
            GepConfig cfg;
            cfg.sparsity = s;
            cfg.num_directions = opts.num_directions;
            cfg.tol = opts.tol;
            cfg.max_iter = opts.max_iter;
            cfg.seed = opts.seed;
            cfg.restarts = opts.restarts;
            cfg.step_size = opts.step_size;
            cfg.ridge = opts.ridge;
            cfg.init_vectors = opts.init_vectors;
            out.basis = rifle_topk(sir_matrix(x, sl),
                                   detail::covariance_or_identity(x, opts.identity_sigma), cfg);
            break;
        }
        case Method::PrSir: {
            SymmetricMatrix m = pr_sir_matrix(x, y, opts.slices, opts.n_proj, opts.seed);
            if (opts.identity_sigma)
                out.basis = dense_eigen_topk(m.values(), opts.num_directions);
            else
                out.basis = dense_generalized_topk(m.values(), sample_covariance(x).values(),
                                                   opts.num_directions, opts.ridge);
            break;
        }
        case Method::OracleSir: {
            if (opts.support.empty()) throw ParameterError("oracle-sir needs a support index set");
            SliceAssignment sl = slice_labels(detail::univariate_response(y, method), opts.slices);
            out.basis = oracle_sir_basis(x, sl, opts.support, opts.num_directions,
                                         opts.identity_sigma ? SigmaMode::Identity
                                                             : SigmaMode::SampleCovariance);
            break;
        }
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace sdr
