#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <utility>

#include "sdr/error.hpp"

namespace sdr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense observation matrix, rows = observations, columns = variables.
/// Construction rejects non-finite entries eagerly, naming the offending row.
class DataMatrix {
   public:
    explicit DataMatrix(Matrix values) : values_(std::move(values)) {
        if (values_.rows() < 2)
            throw DataError("DataMatrix needs at least 2 observations, got " +
                            std::to_string(values_.rows()));
        if (values_.cols() < 1) throw DataError("DataMatrix needs at least 1 variable");
        for (Eigen::Index i = 0; i < values_.rows(); ++i) {
            if (!values_.row(i).allFinite())
                throw DataError("non-finite value in observation row " + std::to_string(i));
        }
    }

    const Matrix& values() const { return values_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }

   private:
    Matrix values_;
};

enum class MatrixKind { Mddm, Covariance, Sir };

inline const char* to_string(MatrixKind k) {
    switch (k) {
        case MatrixKind::Mddm: return "mddm";
        case MatrixKind::Covariance: return "covariance";
        case MatrixKind::Sir: return "sir";
    }
    return "?";
}

/// Square symmetric matrix with a tag saying which estimator produced it.
class SymmetricMatrix {
   public:
    static constexpr double kSymmetryTol = 1e-10;

    SymmetricMatrix(Matrix values, MatrixKind kind)
        : values_(std::move(values)), kind_(kind) {
        if (values_.rows() != values_.cols())
            throw DimensionError("symmetric matrix must be square");
        const double dev = (values_ - values_.transpose()).cwiseAbs().maxCoeff();
        if (dev > kSymmetryTol)
            throw NumericalError("matrix asymmetry " + std::to_string(dev) +
                                 " exceeds tolerance");
    }

    const Matrix& values() const { return values_; }
    MatrixKind kind() const { return kind_; }
    Eigen::Index dim() const { return values_.rows(); }

   private:
    Matrix values_;
    MatrixKind kind_;
};

/// (A + A^T)/2; removes the rounding asymmetry of accumulated products.
inline Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace sdr
