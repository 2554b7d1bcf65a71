// Deterministic test configuration builders.
#pragma once

#include <cstdint>
#include <vector>

#include "srm/engine.hpp"
#include "srm/random.hpp"
#include "srm/snapshots.hpp"
#include "srm/spherodisk.hpp"

namespace fixture {

// Uniform random particles; overlap is allowed (the callers are oracles
// and descriptor tests, not packing code).
template <int N>
std::vector<srm::Particle<N>> random_particles(std::size_t n, double rmin, double rmax,
                                               const srm::PeriodicBox<N>& box, srm::Rng& rng) {
    std::vector<srm::Particle<N>> ps(n);
    for (std::size_t i = 0; i < n; ++i) {
        ps[i].id = static_cast<int>(i);
        ps[i].pos = srm::random_point(rng, box);
        ps[i].radius = rng.uniform(rmin, rmax);
    }
    return ps;
}

inline srm::SphereSnapshot sphere_snapshot(std::size_t n, double rmin, double rmax,
                                           const srm::PeriodicBox3& box, std::uint64_t seed) {
    srm::Rng rng(seed);
    srm::SphereSnapshot snap;
    snap.box = box;
    snap.particles = random_particles<3>(n, rmin, rmax, box, rng);
    snap.refresh_volume_fraction();
    return snap;
}

inline std::vector<srm::Spherodisk> random_platelets(std::size_t n, double diameter,
                                                     double thickness,
                                                     const srm::PeriodicBox3& box,
                                                     srm::Rng& rng) {
    std::vector<srm::Spherodisk> ps(n);
    for (std::size_t i = 0; i < n; ++i) {
        ps[i].id = static_cast<int>(i);
        ps[i].pos = srm::random_point(rng, box);
        ps[i].normal = srm::random_unit_vector<3>(rng);
        ps[i].diameter = diameter;
        ps[i].thickness = thickness;
    }
    return ps;
}

}  // namespace fixture
