#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "sdr/mddm.hpp"
#include "sdr/rng.hpp"

using sdr::DataMatrix;
using sdr::Matrix;
using sdr::Vector;

namespace {

// Definition-level oracle: explicit double loop over row pairs.
Matrix naive_pairwise(const Matrix& y) {
    const Eigen::Index n = y.rows();
    Matrix d(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) d(j, k) = (y.row(j) - y.row(k)).norm();
    return d;
}

// Definition-level oracle: triple loop over pairs and coordinates.
Matrix naive_mddm(const Matrix& x, const Matrix& y) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    Eigen::RowVectorXd xbar = x.colwise().mean();
    Matrix m = Matrix::Zero(p, p);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = (y.row(j) - y.row(k)).norm();
            m += ((x.row(j) - xbar).transpose() * (x.row(k) - xbar)) * w;
        }
    return -m / (static_cast<double>(n) * static_cast<double>(n));
}

Matrix naive_covariance(const Matrix& x) {
    const Eigen::Index n = x.rows();
    Eigen::RowVectorXd xbar = x.colwise().mean();
    Matrix s = Matrix::Zero(x.cols(), x.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        s += (x.row(i) - xbar).transpose() * (x.row(i) - xbar);
    return s / static_cast<double>(n);
}

}  // namespace

TEST_CASE("pairwise distances on a 3-4-5 triangle") {
    Matrix y(2, 2);
    y << 0, 0, 3, 4;
    Matrix d = sdr::pairwise_euclidean(DataMatrix(y));
    CHECK(d(0, 0) == 0.0);
    CHECK(d(1, 1) == 0.0);
    CHECK_THAT(d(0, 1), Catch::Matchers::WithinAbs(5.0, 1e-14));
    CHECK_THAT(d(1, 0), Catch::Matchers::WithinAbs(5.0, 1e-14));
}

TEST_CASE("pairwise distances of identical rows vanish") {
    Matrix y = Matrix::Constant(4, 3, 1.7);
    Matrix d = sdr::pairwise_euclidean(DataMatrix(y));
    CHECK(d.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pairwise distances match the double-loop oracle") {
    sdr::Rng rng(71);
    Matrix y = rng.gaussian_matrix(5, 3);
    Matrix d = sdr::pairwise_euclidean(DataMatrix(y));
    Matrix ref = naive_pairwise(y);
    CHECK((d - ref).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(d.minCoeff() >= 0.0);
}

TEST_CASE("fewer than two observations are rejected") {
    Matrix one(1, 3);
    one << 1, 2, 3;
    CHECK_THROWS_AS(DataMatrix(one), sdr::DataError);
}

TEST_CASE("non-finite rows are rejected with the row named") {
    Matrix y(3, 2);
    y << 1, 2, std::nan(""), 4, 5, 6;
    CHECK_THROWS_MATCHES(DataMatrix(y), sdr::DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("row 1")));
}

TEST_CASE("two-point mean-dependence matrix by hand") {
    Matrix x(2, 1), y(2, 1);
    x << 1, -1;
    y << 0, 2;
    sdr::SymmetricMatrix m = sdr::sample_mddm(DataMatrix(x), DataMatrix(y));
    REQUIRE(m.dim() == 1);
    CHECK_THAT(m.values()(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-14));
}

TEST_CASE("constant response gives the zero matrix") {
    sdr::Rng rng(5);
    Matrix x = rng.gaussian_matrix(6, 3);
    Matrix y = Matrix::Constant(6, 2, 3.0);
    sdr::SymmetricMatrix m = sdr::sample_mddm(DataMatrix(x), DataMatrix(y));
    CHECK(m.values().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sample mean-dependence matrix matches the triple-loop oracle") {
    sdr::Rng rng(17);
    Matrix x = rng.gaussian_matrix(6, 3);
    Matrix y = rng.gaussian_matrix(6, 2);
    sdr::SymmetricMatrix m = sdr::sample_mddm(DataMatrix(x), DataMatrix(y));
    Matrix ref = naive_mddm(x, y);
    CHECK((m.values() - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("blocked accumulation is independent of block size") {
    sdr::Rng rng(23);
    Matrix x = rng.gaussian_matrix(137, 7);
    Matrix y = rng.gaussian_matrix(137, 2);
    Matrix whole = sdr::sample_mddm(DataMatrix(x), DataMatrix(y), 512).values();
    Matrix blocked = sdr::sample_mddm(DataMatrix(x), DataMatrix(y), 16).values();
    CHECK((whole - blocked).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("row-count mismatch is a dimension error") {
    sdr::Rng rng(2);
    DataMatrix x(rng.gaussian_matrix(5, 2));
    DataMatrix y(rng.gaussian_matrix(6, 1));
    CHECK_THROWS_AS(sdr::sample_mddm(x, y), sdr::DimensionError);
}

TEST_CASE("two-point variance with 1/n divisor") {
    Matrix x(2, 1);
    x << 0, 2;
    sdr::SymmetricMatrix s = sdr::sample_covariance(DataMatrix(x));
    CHECK_THAT(s.values()(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-14));
}

TEST_CASE("constant column zeroes its covariance row and column") {
    sdr::Rng rng(3);
    Matrix x = rng.gaussian_matrix(8, 3);
    x.col(1).setConstant(4.2);
    sdr::SymmetricMatrix s = sdr::sample_covariance(DataMatrix(x));
    CHECK(s.values().row(1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(s.values().col(1).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sample covariance matches the loop oracle") {
    sdr::Rng rng(29);
    Matrix x = rng.gaussian_matrix(8, 4);
    sdr::SymmetricMatrix s = sdr::sample_covariance(DataMatrix(x));
    CHECK((s.values() - naive_covariance(x)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("linear-map equivariance of the mean-dependence matrix") {
    for (int trial = 0; trial < 20; ++trial) {
        sdr::Rng rng(100 + trial);
        Matrix x = rng.gaussian_matrix(15, 4);
        Matrix y = rng.gaussian_matrix(15, 2);
        Matrix a = rng.gaussian_matrix(4, 3);
        Matrix lhs = sdr::sample_mddm(DataMatrix(x * a), DataMatrix(y)).values();
        Matrix rhs = a.transpose() * sdr::sample_mddm(DataMatrix(x), DataMatrix(y)).values() * a;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("translation invariance in both arguments") {
    for (int trial = 0; trial < 20; ++trial) {
        sdr::Rng rng(300 + trial);
        Matrix x = rng.gaussian_matrix(12, 3);
        Matrix y = rng.gaussian_matrix(12, 2);
        Matrix m0 = sdr::sample_mddm(DataMatrix(x), DataMatrix(y)).values();
        Matrix xs = x.rowwise() + Eigen::RowVector3d(2.5, -1.0, 0.25);
        Matrix ys = y.rowwise() + Eigen::RowVector2d(-3.0, 7.0);
        CHECK((sdr::sample_mddm(DataMatrix(xs), DataMatrix(y)).values() - m0)
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK((sdr::sample_mddm(DataMatrix(x), DataMatrix(ys)).values() - m0)
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("positive semi-definite across random instances") {
    for (int trial = 0; trial < 200; ++trial) {
        sdr::Rng rng(1000 + trial);
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform() * 47);
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.uniform() * 9);
        const Eigen::Index q = 1 + static_cast<Eigen::Index>(rng.uniform() * 3);
        Matrix x = rng.gaussian_matrix(n, p);
        Matrix y = rng.gaussian_matrix(n, q);
        sdr::SymmetricMatrix m = sdr::sample_mddm(DataMatrix(x), DataMatrix(y));
        Eigen::SelfAdjointEigenSolver<Matrix> es(m.values());
        CHECK(es.eigenvalues().minCoeff() >= -1e-8 * m.values().trace());
    }
}

TEST_CASE("joint row permutation changes nothing") {
    sdr::Rng rng(9);
    const Eigen::Index n = 11;
    Matrix x = rng.gaussian_matrix(n, 3);
    Matrix y = rng.gaussian_matrix(n, 2);
    std::vector<Eigen::Index> perm{3, 1, 4, 0, 9, 2, 6, 5, 10, 8, 7};
    Matrix xp(n, 3), yp(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
        yp.row(i) = y.row(perm[static_cast<std::size_t>(i)]);
    }
    // Permuting rows reorders the floating-point accumulation, so agreement
    // is to rounding, not bitwise.
    CHECK((sdr::sample_mddm(DataMatrix(xp), DataMatrix(yp)).values() -
           sdr::sample_mddm(DataMatrix(x), DataMatrix(y)).values())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((sdr::sample_covariance(DataMatrix(xp)).values() -
           sdr::sample_covariance(DataMatrix(x)).values())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}
