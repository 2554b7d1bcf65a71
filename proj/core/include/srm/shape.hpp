#pragma once

#include <concepts>
#include <span>

#include "srm/cell_grid.hpp"
#include "srm/geometry.hpp"
#include "srm/random.hpp"

namespace srm {

// Behavioral contract the generation engine is generic over. A shape class
// bundles the geometry-dependent operations for one particle type; the
// engine never looks at the particle beyond these and the id field.
template <typename S>
concept ShapeModel = requires(const typename S::ParticleT& p, typename S::ParticleT& mp,
                              const PeriodicBox<S::dim>& box, double x, Rng& rng) {
    requires S::dim == 2 || S::dim == 3;
    { S::overlap(p, p, box) } -> std::same_as<bool>;
    { S::propose_move(p, x, x, rng, box) } -> std::same_as<typename S::ParticleT>;
    { S::swell(mp, x) } -> std::same_as<void>;
    { S::measure(p) } -> std::same_as<double>;
    { S::bounding_radius(p) } -> std::same_as<double>;
    { S::position(p) } -> std::same_as<const Vec<S::dim>&>;
};

// Disks (N=2) and spheres (N=3). Rotation rate is meaningless here and
// ignored by propose_move.
template <int N>
struct SphereShape {
    static constexpr int dim = N;
    using ParticleT = Particle<N>;

    static bool overlap(const ParticleT& a, const ParticleT& b, const PeriodicBox<N>& box) {
        const double rr = a.radius + b.radius;
        return box.min_image_dist2(a.pos, b.pos) <= rr * rr;
    }

    static ParticleT propose_move(const ParticleT& p, double c_m, double /*c_r*/, Rng& rng,
                                  const PeriodicBox<N>& box) {
        ParticleT q = p;
        q.pos = box.wrap(p.pos + c_m * random_unit_vector<N>(rng));
        return q;
    }

    static void swell(ParticleT& p, double factor) { p.radius *= factor; }
    static double measure(const ParticleT& p) { return particle_measure(p); }
    static double bounding_radius(const ParticleT& p) { return p.radius; }
    static const Vec<N>& position(const ParticleT& p) { return p.pos; }
};

using DiskShape = SphereShape<2>;
using BallShape = SphereShape<3>;

template <ShapeModel S>
void build_shape_grid(CellGrid<S::dim>& grid, std::span<const typename S::ParticleT> particles) {
    grid.clear(particles.size());
    for (std::size_t i = 0; i < particles.size(); ++i)
        grid.insert(static_cast<int>(i), S::position(particles[i]));
}

// Generic analogue of check_particle_collision: true iff q overlaps any
// indexed particle with a different id in its 3-wide cell neighborhood.
template <ShapeModel S>
bool shape_collides(const typename S::ParticleT& q,
                    std::span<const typename S::ParticleT> particles,
                    const CellGrid<S::dim>& grid) {
    return grid.visit_neighborhood(S::position(q), [&](int id) {
        const auto& t = particles[static_cast<std::size_t>(id)];
        if (t.id == q.id) return false;
        return S::overlap(q, t, grid.box());
    });
}

template <ShapeModel S>
bool shape_any_collision(std::span<const typename S::ParticleT> particles,
                         const CellGrid<S::dim>& grid) {
    for (const auto& p : particles)
        if (shape_collides<S>(p, particles, grid)) return true;
    return false;
}

template <ShapeModel S>
double shape_volume_fraction(std::span<const typename S::ParticleT> particles,
                             const PeriodicBox<S::dim>& box) {
    double sum = 0.0;
    for (const auto& p : particles) sum += S::measure(p);
    return sum / box.measure();
}

template <ShapeModel S>
double max_bounding_radius(std::span<const typename S::ParticleT> particles) {
    double r = 0.0;
    for (const auto& p : particles) r = std::max(r, S::bounding_radius(p));
    return r;
}

}  // namespace srm
