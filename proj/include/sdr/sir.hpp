#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sdr/dense.hpp"
#include "sdr/error.hpp"
#include "sdr/rng.hpp"
#include "sdr/types.hpp"

namespace sdr {

struct SliceAssignment {
    std::vector<int> labels;  // length n, values in [0, slice_count)
    int slice_count = 0;
    std::vector<int> counts;  // per-slice sizes, all positive
};

/// Equal-frequency slice labels from the empirical quantiles of y.
/// Ties go to the lower slice, so equal responses always share a label.
/// Fails when that collapses a slice to empty.
inline SliceAssignment slice_labels(const Vector& y, int slices) {
    const Eigen::Index n = y.size();
    if (slices < 1 || slices > n)
        throw ParameterError("slice count must be in [1, " + std::to_string(n) + "], got " +
                             std::to_string(slices));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (y[a] != y[b]) return y[a] < y[b];
        return a < b;
    });

    SliceAssignment out;
    out.labels.assign(static_cast<std::size_t>(n), 0);
    out.slice_count = slices;
    out.counts.assign(static_cast<std::size_t>(slices), 0);
    int prev_label = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
        int lab = static_cast<int>((r * static_cast<Eigen::Index>(slices)) / n);
        if (r > 0 && y[order[static_cast<std::size_t>(r)]] == y[order[static_cast<std::size_t>(r - 1)]])
            lab = prev_label;
        out.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = lab;
        out.counts[static_cast<std::size_t>(lab)] += 1;
        prev_label = lab;
    }
    for (int h = 0; h < slices; ++h) {
        if (out.counts[static_cast<std::size_t>(h)] == 0)
            throw ParameterError("cannot form " + std::to_string(slices) +
                                 " nonempty slices (ties collapsed slice " + std::to_string(h) +
                                 ")");
    }
    return out;
}

/// Weighted covariance of within-slice means:
///   sum_h (n_h / n) (m_h - xbar)(m_h - xbar)'.
inline SymmetricMatrix sir_matrix(const DataMatrix& x, const SliceAssignment& slices) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (static_cast<Eigen::Index>(slices.labels.size()) != n)
        throw DimensionError("slice labels length mismatch");
    const int H = slices.slice_count;
    Matrix means = Matrix::Zero(H, p);
    std::vector<int> counts(static_cast<std::size_t>(H), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int h = slices.labels[static_cast<std::size_t>(i)];
        if (h < 0 || h >= H) throw ParameterError("slice label out of range");
        means.row(h) += x.values().row(i);
        counts[static_cast<std::size_t>(h)] += 1;
    }
    Eigen::RowVectorXd xbar = x.values().colwise().mean();
    Matrix m = Matrix::Zero(p, p);
    for (int h = 0; h < H; ++h) {
        const int nh = counts[static_cast<std::size_t>(h)];
        if (nh == 0) throw ParameterError("empty slice " + std::to_string(h));
        Eigen::RowVectorXd d = means.row(h) / nh - xbar;
        m.noalias() += (static_cast<double>(nh) / static_cast<double>(n)) *
                       (d.transpose() * d);
    }
    return SymmetricMatrix(symmetrized(m), MatrixKind::Sir);
}

/// Slice-mean covariance for a multivariate response, averaged over random
/// unit projections of y. Projections whose slicing degenerates (constant
/// projected response) are skipped and tallied in *skipped when given.
/// n_proj = 0 picks the ceil(n log n) default.
inline SymmetricMatrix pr_sir_matrix(const DataMatrix& x, const DataMatrix& y, int slices,
                                     int n_proj, std::uint64_t seed, int* skipped = nullptr) {
    if (x.rows() != y.rows()) throw DimensionError("row-count mismatch between x and y");
    const Eigen::Index n = x.rows();
    const Eigen::Index q = y.cols();
    if (n_proj == 0)
        n_proj = static_cast<int>(std::ceil(static_cast<double>(n) * std::log(static_cast<double>(n))));
    if (n_proj < 1) throw ParameterError("n_proj must be at least 1");

    Matrix acc = Matrix::Zero(x.cols(), x.cols());
    int used = 0, skip = 0;
    for (int r = 0; r < n_proj; ++r) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
        Vector u = rng.unit_sphere(q);
        Vector z = y.values() * u;
        try {
            SliceAssignment sl = slice_labels(z, slices);
            acc += sir_matrix(x, sl).values();
            ++used;
        } catch (const ParameterError&) {
            ++skip;
        }
    }
    if (skipped) *skipped = skip;
    if (used == 0)
        throw NumericalError("all " + std::to_string(n_proj) +
                             " projections produced degenerate slicings");
    return SymmetricMatrix(symmetrized(acc / used), MatrixKind::Sir);
}

enum class SigmaMode { Identity, SampleCovariance };

/// Slice-mean estimation restricted to a known support: solves the dense
/// (generalized) eigenproblem on the support block and embeds the directions
/// back into R^p with exact zeros elsewhere.
inline SparseBasis oracle_sir_basis(const DataMatrix& x, const SliceAssignment& slices,
                                    const std::vector<Eigen::Index>& support, int k,
                                    SigmaMode mode) {
    const Eigen::Index p = x.cols();
    if (support.empty() || static_cast<int>(support.size()) < k)
        throw ParameterError("support must contain at least K indices");
    for (Eigen::Index j : support)
        if (j < 0 || j >= p) throw ParameterError("support index out of range");

    Matrix xs(x.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c) xs.col(static_cast<Eigen::Index>(c)) = x.values().col(support[c]);
    DataMatrix restricted(xs);

    SymmetricMatrix ms = sir_matrix(restricted, slices);
    SparseBasis low;
    if (mode == SigmaMode::SampleCovariance) {
        Matrix sig = (xs.rowwise() - xs.colwise().mean()).transpose() *
                     (xs.rowwise() - xs.colwise().mean()) / static_cast<double>(x.rows());
        Eigen::LLT<Matrix> llt(sig);
        if (llt.info() != Eigen::Success)
            throw NumericalError("restricted covariance is singular; set a positive ridge");
        low = dense_generalized_topk(ms.values(), sig, k);
    } else {
        low = dense_eigen_topk(ms.values(), k);
    }

    SparseBasis out;
    out.vectors = Matrix::Zero(p, k);
    out.values = low.values;
    out.converged = low.converged;
    out.sparsity = static_cast<int>(support.size());
    out.norm_kind = low.norm_kind;
    for (int j = 0; j < k; ++j)
        for (std::size_t c = 0; c < support.size(); ++c)
            out.vectors(support[c], j) = low.vectors(static_cast<Eigen::Index>(c), j);
    return out;
}

}  // namespace sdr
