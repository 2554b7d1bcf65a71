#pragma once

#include <cmath>
#include <numbers>

#include "srm/geometry.hpp"
#include "srm/random.hpp"

namespace srm {

// Thin circular platelet: a flat medial disk swept by a ball (Minkowski
// sum). `diameter` is the overall extent of the swept solid and
// `thickness` the sweep ball diameter, so the medial disk has radius
// (diameter - thickness) / 2 and the aspect ratio diameter/thickness
// describes the solid itself.
struct Spherodisk {
    int id = 0;
    Vec3 pos{};     // center, stored wrapped
    Vec3 normal{};  // unit plate normal
    double diameter = 0.0;
    double thickness = 0.0;
};

inline double medial_radius(const Spherodisk& p) { return 0.5 * (p.diameter - p.thickness); }

// Exact swept-solid volume: cylinder core plus outer half-torus rim plus
// the two rim quarter-ball caps that complete a ball at the degenerate
// disk radius. Collapses to the sphere volume when diameter = thickness.
inline double spherodisk_measure(const Spherodisk& p) {
    const double a = medial_radius(p);
    const double s = 0.5 * p.thickness;
    return 2.0 * std::numbers::pi * a * a * s + std::numbers::pi * std::numbers::pi * a * s * s +
           (4.0 / 3.0) * std::numbers::pi * s * s * s;
}

// Euclidean minimum distance between two closed flat disks given in
// relative coordinates (disk 1 centered at c1, disk 2 at c2 = c1 + the
// already-minimum-imaged center offset). Zero iff the disks intersect.
double disk_disk_distance(const Vec3& c1, const Vec3& n1, double r1, const Vec3& c2,
                          const Vec3& n2, double r2);

// Decides disk_disk_distance(...) <= threshold without always computing
// the distance: separation proofs (center gap, slab gaps) and the first
// projection iterate at or below the threshold exit early. Agrees with
// the distance comparison on every input.
bool disks_within(const Vec3& c1, const Vec3& n1, double r1, const Vec3& c2, const Vec3& n2,
                  double r2, double threshold);

// Rotate v by `angle` around the unit axis (Rodrigues form).
inline Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return v * c + cross(axis, v) * s + axis * (axis.dot(v) * (1.0 - c));
}

// Platelets overlap when their medial disks come closer than the sum of
// the sweep radii. A bounding-sphere cull skips the iterative distance
// for far pairs.
inline bool spherodisk_overlap(const Spherodisk& a, const Spherodisk& b,
                               const PeriodicBox3& box) {
    const Vec3 d = box.min_image(b.pos, a.pos);
    const double cull = 0.5 * (a.diameter + b.diameter + a.thickness + b.thickness);
    if (d.norm2() > cull * cull) return false;
    return disks_within(Vec3{}, a.normal, medial_radius(a), d, b.normal, medial_radius(b),
                        0.5 * (a.thickness + b.thickness));
}

// ShapeModel instance for platelets. Moves are rigid-body: a fixed-length
// random translation plus a fixed-angle rotation about a uniformly random
// axis.
struct SpherodiskShape {
    static constexpr int dim = 3;
    using ParticleT = Spherodisk;

    static bool overlap(const Spherodisk& a, const Spherodisk& b, const PeriodicBox3& box) {
        return spherodisk_overlap(a, b, box);
    }

    static Spherodisk propose_move(const Spherodisk& p, double c_m, double c_r, Rng& rng,
                                   const PeriodicBox3& box) {
        Spherodisk q = p;
        q.pos = box.wrap(p.pos + c_m * random_unit_vector<3>(rng));
        const Vec3 axis = random_unit_vector<3>(rng);
        const Vec3 n = rotate_about_axis(p.normal, axis, c_r);
        q.normal = n * (1.0 / n.norm());
        return q;
    }

    static void swell(Spherodisk& p, double factor) {
        p.diameter *= factor;
        p.thickness *= factor;
    }

    static double measure(const Spherodisk& p) { return spherodisk_measure(p); }
    static double bounding_radius(const Spherodisk& p) {
        return 0.5 * (p.diameter + p.thickness);
    }
    static const Vec3& position(const Spherodisk& p) { return p.pos; }
};

}  // namespace srm
