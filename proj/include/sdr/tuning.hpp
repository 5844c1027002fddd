#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "sdr/error.hpp"
#include "sdr/mddm.hpp"
#include "sdr/rifle.hpp"
#include "sdr/sparse_eigen.hpp"
#include "sdr/types.hpp"

namespace sdr {

/// Squared sample distance covariance (the V-statistic form):
/// mean of the entrywise product of the double-centered distance matrices.
/// Non-negative up to rounding; tiny negatives are clamped to zero.
inline double distance_covariance(const DataMatrix& a, const DataMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("row-count mismatch");
    const Eigen::Index n = a.rows();
    auto centered = [n](const DataMatrix& m) {
        Matrix d = pairwise_euclidean(m);
        Vector row_mean = d.rowwise().mean();
        const double grand = d.mean();
        d.colwise() -= row_mean;
        d.rowwise() -= row_mean.transpose();
        d.array() += grand;
        return d;
    };
    const double v = (centered(a).array() * centered(b).array()).sum() /
                     (static_cast<double>(n) * static_cast<double>(n));
    return v > 0.0 ? v : 0.0;
}

enum class CurveMethod { EigenMddm, GepMddm };

struct CurvePoint {
    int sparsity = 0;
    double dcov = 0.0;
    bool ok = false;
    std::string note;  // failure reason when !ok
};

/// Dependence-vs-sparsity profile: for each candidate sparsity level, fits
/// the chosen decomposition and reports the distance covariance between the
/// response and the reduced predictors. Failed fits are recorded in-row so
/// one bad level never aborts the curve. Reading the elbow is left to the
/// caller.
inline std::vector<CurvePoint> sparsity_curve(const DataMatrix& x, const DataMatrix& y,
                                              CurveMethod method, const std::vector<int>& levels,
                                              int num_directions, std::uint64_t seed,
                                              double step_size = 1.0, int restarts = 1) {
    if (levels.empty()) throw ParameterError("sparsity grid is empty");
    for (int s : levels)
        if (s < 1 || s > x.cols()) throw ParameterError("sparsity level out of range: " + std::to_string(s));

    SymmetricMatrix m = sample_mddm(x, y);
    SymmetricMatrix sigma = method == CurveMethod::GepMddm
                                ? sample_covariance(x)
                                : SymmetricMatrix(Matrix::Identity(x.cols(), x.cols()),
                                                  MatrixKind::Covariance);

    std::vector<CurvePoint> out;
    out.reserve(levels.size());
    for (int s : levels) {
        CurvePoint pt;
        pt.sparsity = s;
        try {
            SparseBasis basis;
            if (method == CurveMethod::EigenMddm) {
                IterationConfig cfg;
                cfg.sparsity = s;
                cfg.num_directions = num_directions;
                cfg.seed = derive_seed(seed, {static_cast<std::uint64_t>(s)});
                cfg.restarts = restarts;
                basis = penalized_eigen_topk(m, cfg);
            } else {
                GepConfig cfg;
                cfg.sparsity = s;
                cfg.num_directions = num_directions;
                cfg.seed = derive_seed(seed, {static_cast<std::uint64_t>(s)});
                cfg.restarts = restarts;
                cfg.step_size = step_size;
                basis = rifle_topk(m, sigma, cfg);
            }
            DataMatrix reduced(x.values() * basis.vectors);
            pt.dcov = distance_covariance(y, reduced);
            pt.ok = true;
        } catch (const Error& e) {
            pt.ok = false;
            pt.note = e.what();
        }
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace sdr
