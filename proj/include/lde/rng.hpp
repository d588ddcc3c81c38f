#pragma once

#include "lde/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace lde {

/// splitmix64 mix function, used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded PRNG with platform-independent Gaussian sampling.
///
/// std::normal_distribution is implementation-defined, so complex Gaussians
/// are generated from raw mt19937_64 output (exponential radius + uniform
/// phase). A draw sequence is fully determined by the seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

    /// Circularly-symmetric complex Gaussian CN(0, variance):
    /// real and imaginary parts are each N(0, variance/2).
    cxd cgauss(double variance = 1.0) {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-variance * std::log1p(-u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

    /// Real N(0, variance).
    double gauss(double variance = 1.0) { return cgauss(2.0 * variance).real(); }

    CMat cgauss_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0) {
        CMat m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = cgauss(variance);
        return m;
    }

    CVec cgauss_vector(Eigen::Index n, double variance = 1.0) {
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = cgauss(variance);
        return v;
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace lde
