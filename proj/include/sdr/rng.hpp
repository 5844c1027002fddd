#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace sdr {

/// splitmix64 step; the usual seed-expansion primitive.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and a fixed path of counters.
/// Children with different paths are independent streams, so adding a new
/// consumer never perturbs an existing one.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = master;
    std::uint64_t out = splitmix64(s);
    for (std::uint64_t c : path) {
        s = out ^ (c + 0x9e3779b97f4a7c15ULL);
        out = splitmix64(s);
    }
    return out;
}

/// Seeded generator with the Gaussian helpers used across the library.
/// One instance per logical stream; never share across streams.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    Eigen::VectorXd gaussian_vector(Eigen::Index p) {
        Eigen::VectorXd v(p);
        for (Eigen::Index i = 0; i < p; ++i) v[i] = normal();
        return v;
    }

    /// Row-major fill so the stream layout is independent of Eigen's storage order.
    Eigen::MatrixXd gaussian_matrix(Eigen::Index n, Eigen::Index d) {
        Eigen::MatrixXd m(n, d);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = normal();
        return m;
    }

    /// Uniform direction on the unit sphere in R^q.
    Eigen::VectorXd unit_sphere(Eigen::Index q) {
        Eigen::VectorXd v;
        double nrm = 0.0;
        do {
            v = gaussian_vector(q);
            nrm = v.norm();
        } while (nrm == 0.0);
        return v / nrm;
    }

    std::mt19937_64& engine() { return engine_; }

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace sdr
