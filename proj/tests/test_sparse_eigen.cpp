#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "sdr/rng.hpp"
#include "sdr/sparse_eigen.hpp"
#include "sdr/types.hpp"

using sdr::IterationConfig;
using sdr::Matrix;
using sdr::SymmetricMatrix;
using sdr::Vector;

namespace {

Eigen::Index nnz(const Vector& v) {
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) ++c;
    return c;
}

double sin_angle(const Vector& a, const Vector& b) {
    const double c = std::abs(a.normalized().dot(b.normalized()));
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

// Random symmetric PSD matrix with eigenvalue gaps of at least `gap`.
Matrix gapped_psd(Eigen::Index p, double gap, sdr::Rng& rng) {
    Matrix a = rng.gaussian_matrix(p, p);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    Vector lam(p);
    double lo = 0.5;
    for (Eigen::Index i = p - 1; i >= 0; --i) {
        lam[i] = lo;
        lo += gap + rng.uniform();
    }
    return sdr::symmetrized(q * lam.asDiagonal() * q.transpose());
}

}  // namespace

TEST_CASE("hard threshold keeps the largest magnitudes") {
    Vector v(3);
    v << 3, -1, 2;
    Vector t = sdr::hard_threshold(v, 2);
    CHECK(t[0] == 3.0);
    CHECK(t[1] == 0.0);
    CHECK(t[2] == 2.0);
}

TEST_CASE("hard threshold ties go to the lowest index") {
    Vector v = Vector::Ones(3);
    Vector t = sdr::hard_threshold(v, 2);
    CHECK(t[0] == 1.0);
    CHECK(t[1] == 1.0);
    CHECK(t[2] == 0.0);
}

TEST_CASE("hard threshold with s = p is the identity") {
    Vector v(4);
    v << -0.3, 1.2, 0.0, 5.0;
    CHECK(sdr::hard_threshold(v, 4) == v);
}

TEST_CASE("hard threshold keeps min(s, nnz) nonzeros") {
    Vector v(4);
    v << 1.0, 0.0, 0.0, 0.0;
    CHECK(nnz(sdr::hard_threshold(v, 3)) == 1);
}

TEST_CASE("hard threshold rejects s out of range") {
    Vector v = Vector::Ones(3);
    CHECK_THROWS_AS(sdr::hard_threshold(v, 0), sdr::ParameterError);
    CHECK_THROWS_AS(sdr::hard_threshold(v, 4), sdr::ParameterError);
}

TEST_CASE("power iteration on a rank-one matrix") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    Vector v0(3);
    v0 << 0.4, 0.7, -0.2;
    auto res = sdr::truncated_power_vector(m, 2, v0, 1e-8, 100);
    CHECK(res.converged);
    CHECK(res.iterations <= 2);
    CHECK_THAT(std::abs(res.beta[0]), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(res.value, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("sparsity one on a diagonal matrix picks the dominant axis") {
    Matrix m = Eigen::Vector3d(5.0, 2.0, 1.0).asDiagonal();
    Vector v0 = Vector::Ones(3) / std::sqrt(3.0);
    auto res = sdr::truncated_power_vector(m, 1, v0, 1e-10, 200);
    CHECK(res.converged);
    CHECK_THAT(std::abs(res.beta[0]), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(nnz(res.beta) == 1);
    CHECK_THAT(res.value, Catch::Matchers::WithinAbs(5.0, 1e-10));
}

TEST_CASE("dense run matches the eigensolver on a random PSD matrix") {
    sdr::Rng rng(41);
    Matrix m = gapped_psd(6, 0.5, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Vector top = es.eigenvectors().col(5);
    Vector v0 = rng.gaussian_vector(6);
    auto res = sdr::truncated_power_vector(m, 6, v0, 1e-12, 2000);
    CHECK(sin_angle(res.beta, top) < 1e-6);
    CHECK_THAT(res.value, Catch::Matchers::WithinAbs(es.eigenvalues()[5], 1e-8));
}

TEST_CASE("annihilated iterate is a numerical error") {
    Matrix m = Matrix::Zero(3, 3);
    Vector v0 = Vector::Ones(3);
    CHECK_THROWS_AS(sdr::truncated_power_vector(m, 2, v0, 1e-8, 100), sdr::NumericalError);
}

TEST_CASE("iteration cap returns a non-converged flag") {
    sdr::Rng rng(4);
    Matrix m = gapped_psd(6, 0.5, rng);
    Vector v0 = rng.gaussian_vector(6);
    auto res = sdr::truncated_power_vector(m, 6, v0, 1e-16, 2);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 2);
}

TEST_CASE("objective is monotone along the iterates on PSD input") {
    sdr::Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = gapped_psd(8, 0.1, rng);
        Vector v = rng.gaussian_vector(8).normalized();
        double prev = v.dot(m * v);
        for (int t = 0; t < 50; ++t) {
            Vector w = m * v;
            if (nnz(w) > 4) w = sdr::hard_threshold(w, 4);
            w.normalize();
            const double cur = w.dot(m * w);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
            v = w;
        }
    }
}

TEST_CASE("deflated extraction on a diagonal matrix") {
    Matrix m = Eigen::Vector3d(5.0, 2.0, 1.0).asDiagonal();
    IterationConfig cfg;
    cfg.sparsity = 1;
    cfg.num_directions = 2;
    cfg.seed = 11;
    auto basis = sdr::penalized_eigen_topk(SymmetricMatrix(m, sdr::MatrixKind::Mddm), cfg);
    CHECK_THAT(std::abs(basis.vectors(0, 0)), Catch::Matchers::WithinAbs(1.0, 1e-10));
    CHECK_THAT(std::abs(basis.vectors(1, 1)), Catch::Matchers::WithinAbs(1.0, 1e-10));
    CHECK_THAT(basis.values[0], Catch::Matchers::WithinAbs(5.0, 1e-10));
    CHECK_THAT(basis.values[1], Catch::Matchers::WithinAbs(2.0, 1e-10));
}

TEST_CASE("K = 1 reduces to the single-vector iteration") {
    sdr::Rng rng(19);
    Matrix m = gapped_psd(5, 0.5, rng);
    IterationConfig cfg;
    cfg.sparsity = 3;
    cfg.num_directions = 1;
    cfg.seed = 99;
    auto basis = sdr::penalized_eigen_topk(SymmetricMatrix(m, sdr::MatrixKind::Mddm), cfg);
    sdr::Rng init(sdr::derive_seed(99, {0, 0}));
    auto single = sdr::truncated_power_vector(m, 3, init.gaussian_vector(5), cfg.tol, cfg.max_iter);
    CHECK(basis.vectors.col(0) == single.beta);
    CHECK(basis.values[0] == single.value);
}

TEST_CASE("dense top-3 extraction matches the eigensolver") {
    sdr::Rng rng(53);
    Matrix m = gapped_psd(8, 0.5, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    IterationConfig cfg;
    cfg.sparsity = 8;
    cfg.num_directions = 3;
    cfg.seed = 7;
    cfg.tol = 1e-12;
    cfg.max_iter = 5000;
    auto basis = sdr::penalized_eigen_topk(SymmetricMatrix(m, sdr::MatrixKind::Mddm), cfg);
    for (int k = 0; k < 3; ++k)
        CHECK(sin_angle(basis.vectors.col(k), es.eigenvectors().col(7 - k)) < 1e-5);
}

TEST_CASE("outputs are sign-canonical, sparse, and seed-reproducible") {
    sdr::Rng rng(31);
    Matrix m = gapped_psd(7, 0.3, rng);
    IterationConfig cfg;
    cfg.sparsity = 3;
    cfg.num_directions = 2;
    cfg.seed = 1234;
    auto a = sdr::penalized_eigen_topk(SymmetricMatrix(m, sdr::MatrixKind::Mddm), cfg);
    auto b = sdr::penalized_eigen_topk(SymmetricMatrix(m, sdr::MatrixKind::Mddm), cfg);
    CHECK(a.vectors == b.vectors);
    CHECK(a.values == b.values);
    for (int k = 0; k < 2; ++k) {
        const Vector v = a.vectors.col(k);
        CHECK(nnz(v) <= 3);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        CHECK(v[arg] >= 0.0);
    }
}

TEST_CASE("explicit start vectors override the seeded pool") {
    // With sparsity one, the iteration stays in the basin of the start's
    // dominant coordinate; an explicit start therefore pins the outcome.
    Matrix m = Eigen::Vector3d(5.0, 2.0, 1.0).asDiagonal();
    IterationConfig cfg;
    cfg.sparsity = 1;
    cfg.num_directions = 1;
    Matrix starts(3, 1);
    starts << 0.1, 1.0, 0.2;
    cfg.init_vectors = starts;
    auto basis = sdr::penalized_eigen_topk(SymmetricMatrix(m, sdr::MatrixKind::Mddm), cfg);
    CHECK_THAT(std::abs(basis.vectors(1, 0)), Catch::Matchers::WithinAbs(1.0, 1e-10));
    CHECK_THAT(basis.values[0], Catch::Matchers::WithinAbs(2.0, 1e-10));
}

TEST_CASE("config validation rejects bad values") {
    Matrix m = Matrix::Identity(4, 4);
    SymmetricMatrix sm(m, sdr::MatrixKind::Mddm);
    IterationConfig cfg;
    cfg.sparsity = 5;
    CHECK_THROWS_AS(sdr::penalized_eigen_topk(sm, cfg), sdr::ParameterError);
    cfg.sparsity = 2;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(sdr::penalized_eigen_topk(sm, cfg), sdr::ParameterError);
}
