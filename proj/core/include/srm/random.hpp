#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "srm/geometry.hpp"

namespace srm {

// All stochastic code in the library draws through this wrapper so that a
// (seed, call sequence) pair fully determines a run. Distributions are
// hand-rolled on top of mt19937_64 because the standard library ones are not
// pinned across implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform on [0, 1), 53-bit mantissa.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive and far below 2^64, so
    // the modulo bias is negligible for our uses (n is a particle count).
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    // Standard normal via Box-Muller, one value per call (the pair's second
    // member is cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Uniform point inside the box. Products u*L can round up to exactly L, so
// the result is wrapped before returning.
template <int N>
Vec<N> random_point(Rng& rng, const PeriodicBox<N>& box) {
    Vec<N> p;
    for (int i = 0; i < N; ++i) p[i] = rng.uniform() * box.length(i);
    return box.wrap(p);
}

inline Vec2 random_unit_vector(Rng& rng, Vec2*) {
    const double a = rng.uniform() * 2.0 * std::numbers::pi;
    return Vec2{{std::cos(a), std::sin(a)}};
}

inline Vec3 random_unit_vector(Rng& rng, Vec3*) {
    while (true) {
        Vec3 g{{rng.gaussian(), rng.gaussian(), rng.gaussian()}};
        const double n2 = g.norm2();
        if (n2 > 1e-24) return g * (1.0 / std::sqrt(n2));
    }
}

// Uniformly distributed direction on the unit circle (N=2) or sphere (N=3).
template <int N>
Vec<N> random_unit_vector(Rng& rng) {
    return random_unit_vector(rng, static_cast<Vec<N>*>(nullptr));
}

// splitmix64 step; used to derive independent streams (ensemble members,
// sub-stages) from one user-facing seed without coupling their sequences.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace srm
