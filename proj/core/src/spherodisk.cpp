#include "srm/spherodisk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace srm {

namespace {

// Closest point of the closed disk (c, n, r) to p: project onto the
// supporting plane, then clamp radially to the rim.
Vec3 closest_on_disk(const Vec3& c, const Vec3& n, double r, const Vec3& p) {
    const Vec3 w = p - c;
    Vec3 in_plane = w - n * w.dot(n);
    const double d2 = in_plane.norm2();
    if (d2 > r * r) in_plane = in_plane * (r / std::sqrt(d2));
    return c + in_plane;
}

struct ProjectionRun {
    double dist;
    bool converged;
};

// Alternate projections between the two disks starting from a point on
// disk 2. Both sets are convex, so a fixed pair realizes the global
// minimum; the distance sequence is non-increasing and we stop when it
// stalls below tol.
ProjectionRun alternate(const Vec3& c1, const Vec3& n1, double r1, const Vec3& c2, const Vec3& n2,
                        double r2, Vec3 p2, double tol, int max_iter) {
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        const Vec3 p1 = closest_on_disk(c1, n1, r1, p2);
        p2 = closest_on_disk(c2, n2, r2, p1);
        const double d = (p1 - p2).norm();
        if (prev - d <= tol) return {d, true};
        prev = d;
    }
    return {prev, false};
}

}  // namespace

double disk_disk_distance(const Vec3& c1, const Vec3& n1, double r1, const Vec3& c2,
                          const Vec3& n2, double r2) {
    const double tol = 1e-12 * std::max({r1, r2, 1e-30});
    ProjectionRun main = alternate(c1, n1, r1, c2, n2, r2, closest_on_disk(c2, n2, r2, c1), tol,
                                   200);
    if (main.converged) return main.dist;

    // Slow convergence (near-parallel rims sliding past each other):
    // restart from a fan of rim points on disk 2 and keep the best run.
    double best = main.dist;
    Vec3 u = std::abs(n2[0]) < 0.9 ? Vec3{{1.0, 0.0, 0.0}} : Vec3{{0.0, 1.0, 0.0}};
    u = u - n2 * u.dot(n2);
    u = u * (1.0 / u.norm());
    const Vec3 v = cross(n2, u);
    constexpr int kSeeds = 32;
    for (int k = 0; k < kSeeds; ++k) {
        const double a = 2.0 * std::numbers::pi * k / kSeeds;
        const Vec3 seed = c2 + (u * std::cos(a) + v * std::sin(a)) * r2;
        best = std::min(best, alternate(c1, n1, r1, c2, n2, r2, seed, tol, 64).dist);
    }
    return best;
}

bool disks_within(const Vec3& c1, const Vec3& n1, double r1, const Vec3& c2, const Vec3& n2,
                  double r2, double threshold) {
    const Vec3 d = c2 - c1;
    // Separation proofs, cheapest first. Each expression is an exact lower
    // bound on the disk-disk distance: the center gap, and the gap between
    // either disk's plane and the other disk's farthest reach toward it.
    if (d.norm() - r1 - r2 > threshold) return false;
    const double ndot = n1.dot(n2);
    const double sin_tilt = std::sqrt(std::max(0.0, 1.0 - ndot * ndot));
    if (std::abs(n1.dot(d)) - r2 * sin_tilt > threshold) return false;
    if (std::abs(n2.dot(d)) - r1 * sin_tilt > threshold) return false;

    // Same iterate sequence as disk_disk_distance, but any iterate at or
    // below the threshold already decides (the sequence never increases).
    const double tol = 1e-12 * std::max({r1, r2, 1e-30});
    Vec3 p2 = closest_on_disk(c2, n2, r2, c1);
    double prev = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const Vec3 p1 = closest_on_disk(c1, n1, r1, p2);
        p2 = closest_on_disk(c2, n2, r2, p1);
        const double dist = (p1 - p2).norm();
        if (dist <= threshold) return true;
        if (prev - dist <= tol) {
            converged = true;
            break;
        }
        prev = dist;
    }
    if (converged) return false;

    Vec3 u = std::abs(n2[0]) < 0.9 ? Vec3{{1.0, 0.0, 0.0}} : Vec3{{0.0, 1.0, 0.0}};
    u = u - n2 * u.dot(n2);
    u = u * (1.0 / u.norm());
    const Vec3 v = cross(n2, u);
    constexpr int kSeeds = 32;
    for (int k = 0; k < kSeeds; ++k) {
        const double a = 2.0 * std::numbers::pi * k / kSeeds;
        const Vec3 seed = c2 + (u * std::cos(a) + v * std::sin(a)) * r2;
        ProjectionRun run = alternate(c1, n1, r1, c2, n2, r2, seed, tol, 64);
        if (run.dist <= threshold) return true;
    }
    return false;
}

}  // namespace srm
