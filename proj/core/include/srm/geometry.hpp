#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace srm {

// Fixed-dimension Cartesian vector. N is 2 or 3 everywhere in this library.
template <int N>
struct Vec {
    std::array<double, N> v{};

    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    friend Vec operator+(Vec a, const Vec& b) {
        for (int i = 0; i < N; ++i) a.v[i] += b.v[i];
        return a;
    }
    friend Vec operator-(Vec a, const Vec& b) {
        for (int i = 0; i < N; ++i) a.v[i] -= b.v[i];
        return a;
    }
    friend Vec operator*(Vec a, double s) {
        for (int i = 0; i < N; ++i) a.v[i] *= s;
        return a;
    }
    friend Vec operator*(double s, Vec a) { return a * s; }
    Vec& operator+=(const Vec& b) {
        for (int i = 0; i < N; ++i) v[i] += b.v[i];
        return *this;
    }
    Vec& operator-=(const Vec& b) {
        for (int i = 0; i < N; ++i) v[i] -= b.v[i];
        return *this;
    }
    friend bool operator==(const Vec& a, const Vec& b) { return a.v == b.v; }

    double dot(const Vec& b) const {
        double s = 0.0;
        for (int i = 0; i < N; ++i) s += v[i] * b.v[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return Vec3{{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

// Rectangular (2D) or cuboid (3D) periodic domain. Owns the wrap and
// minimum-image semantics used by every other component. Positions handed to
// min_image() must already be stored wrapped; single-step displacements are
// assumed smaller than half a box length per axis, so one conditional shift
// per axis is enough.
template <int N>
class PeriodicBox {
  public:
    explicit PeriodicBox(std::array<double, N> lengths) : lengths_(lengths) {
        for (int i = 0; i < N; ++i) {
            if (!(lengths_[i] > 0.0))
                throw std::invalid_argument("PeriodicBox: axis length " + std::to_string(i) +
                                            " must be positive");
        }
    }

    static PeriodicBox unit() {
        std::array<double, N> l;
        l.fill(1.0);
        return PeriodicBox(l);
    }

    static PeriodicBox cube(double edge) {
        std::array<double, N> l;
        l.fill(edge);
        return PeriodicBox(l);
    }

    static constexpr int dim() { return N; }
    double length(int axis) const { return lengths_[static_cast<std::size_t>(axis)]; }
    const std::array<double, N>& lengths() const { return lengths_; }

    bool is_cubic(double rel_tol = 0.0) const {
        for (int i = 1; i < N; ++i)
            if (std::abs(lengths_[i] - lengths_[0]) > rel_tol * lengths_[0]) return false;
        return true;
    }

    double measure() const {
        double m = 1.0;
        for (int i = 0; i < N; ++i) m *= lengths_[i];
        return m;
    }

    // Shift each coordinate by -L, 0 or +L into [0, L). The checks run in
    // sequence so a negative value that rounds up to exactly L still lands
    // back at 0.
    Vec<N> wrap(Vec<N> p) const {
        for (int i = 0; i < N; ++i) {
            const double L = lengths_[i];
            if (p[i] < 0.0) p[i] += L;
            if (p[i] >= L) p[i] -= L;
        }
        return p;
    }

    // Shortest periodic displacement a - b, one conditional shift per axis.
    Vec<N> min_image(const Vec<N>& a, const Vec<N>& b) const {
        Vec<N> d = a - b;
        for (int i = 0; i < N; ++i) {
            const double half = 0.5 * lengths_[i];
            if (d[i] > half) d[i] -= lengths_[i];
            if (d[i] < -half) d[i] += lengths_[i];
        }
        return d;
    }

    double min_image_dist2(const Vec<N>& a, const Vec<N>& b) const {
        return min_image(a, b).norm2();
    }

  private:
    std::array<double, N> lengths_;
};

using PeriodicBox2 = PeriodicBox<2>;
using PeriodicBox3 = PeriodicBox<3>;

// Disk (2D) or sphere (3D); the unit moved and swollen by the engine.
template <int N>
struct Particle {
    int id = 0;
    Vec<N> pos{};
    double radius = 0.0;
};

using Disk = Particle<2>;
using Sphere = Particle<3>;

inline double particle_measure(const Particle<2>& p) {
    return std::numbers::pi * p.radius * p.radius;
}

inline double particle_measure(const Particle<3>& p) {
    return (4.0 / 3.0) * std::numbers::pi * p.radius * p.radius * p.radius;
}

// Sum of particle areas/volumes over the box measure. Overlap is ignored;
// callers guarantee a non-overlapping configuration.
template <int N>
double volume_fraction(std::span<const Particle<N>> particles, const PeriodicBox<N>& box) {
    double sum = 0.0;
    for (const auto& p : particles) sum += particle_measure(p);
    return sum / box.measure();
}

}  // namespace srm
