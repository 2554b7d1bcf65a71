#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "srm/cell_grid.hpp"
#include "srm/errors.hpp"
#include "srm/geometry.hpp"
#include "srm/random.hpp"
#include "srm/shape.hpp"

namespace srm {

// Generation parameters. Defaults are deliberately mild; the preset
// recipes in recipes.hpp override them per regime.
struct SrmParams {
    double c_w = 0.02;   // swelling rate: per-iteration fractional size growth
    double c_m = 0.01;   // migration rate: trial displacement length
    double c_r = 0.0;    // rotation rate in radians; ignored by spheres/disks
    int n_k = 8;         // swell-migrate rounds per iteration, also shake cycles
    int n_l = 8;         // trial moves per particle per round
    double f_target = 0.5;
    std::int64_t max_iterations = 1000000;
    std::uint64_t seed = 1;
    int reorder_period = 16;  // accepted iterations between locality sorts; 0 = never
};

// Throws ValidationError on out-of-range parameters. The c_w cap keeps the
// grid safety bound intact: cell size is computed from pre-swell radii
// (2.5x margin) but indexes post-swell particles (needs 2x), which is
// sound only while 2.5 >= 2 * (1 + c_w).
inline void validate_params(const SrmParams& p) {
    if (!(p.c_w >= 0.0)) throw ValidationError("params: c_w must be >= 0");
    if (!(p.c_w <= 0.25)) throw ValidationError("params: c_w must be <= 0.25 (cell safety bound)");
    if (!(p.c_m >= 0.0)) throw ValidationError("params: c_m must be >= 0");
    if (!(p.c_r >= 0.0)) throw ValidationError("params: c_r must be >= 0");
    if (p.n_k < 1) throw ValidationError("params: n_k must be >= 1");
    if (p.n_l < 1) throw ValidationError("params: n_l must be >= 1");
    if (!(p.f_target > 0.0 && p.f_target < 1.0))
        throw ValidationError("params: f_target must lie in (0, 1)");
    if (p.max_iterations < 1) throw ValidationError("params: max_iterations must be >= 1");
    if (p.reorder_period < 0) throw ValidationError("params: reorder_period must be >= 0");
}

// A complete generation state: the domain, the particles, and enough
// metadata to reproduce the run.
template <ShapeModel S>
struct Snapshot {
    PeriodicBox<S::dim> box = PeriodicBox<S::dim>::unit();
    std::vector<typename S::ParticleT> particles;
    double volume_fraction = 0.0;
    std::int64_t iteration_count = 0;
    SrmParams params{};
    std::uint64_t seed = 0;

    void refresh_volume_fraction() {
        volume_fraction = shape_volume_fraction<S>(particles, box);
    }
};

enum class GenerateStatus { Converged, IterationLimitExceeded };

template <ShapeModel S>
struct GenerateResult {
    GenerateStatus status = GenerateStatus::Converged;
    Snapshot<S> snapshot;
};

struct ProgressRecord {
    std::int64_t iteration = 0;
    double volume_fraction = 0.0;
    bool accepted = false;  // false: iteration fell back to a shake pass
    double elapsed_seconds = 0.0;
};

using ProgressSink = std::function<void(const ProgressRecord&)>;

// One migration sweep: particles in storage order, each getting up to n_l
// fixed-length trial displacements from its pre-sweep placement; the first
// non-colliding trial is kept, otherwise the particle stays exactly where
// it was. Checks read live positions, so earlier accepted moves in the
// same sweep are visible. Returns one accepted flag per particle.
template <ShapeModel S>
std::vector<std::uint8_t> migrate(std::vector<typename S::ParticleT>& particles,
                                  const CellGrid<S::dim>& grid, double c_m, double c_r, int n_l,
                                  Rng& rng) {
    std::vector<std::uint8_t> accepted(particles.size(), 0);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const typename S::ParticleT original = particles[i];
        for (int l = 0; l < n_l; ++l) {
            typename S::ParticleT trial =
                S::propose_move(original, c_m, c_r, rng, grid.box());
            if (!shape_collides<S>(trial, particles, grid)) {
                particles[i] = trial;
                accepted[i] = 1;
                break;
            }
        }
    }
    return accepted;
}

// n sweeps of (rebuild grid, migrate) at fixed size. The grid is rebuilt
// before every sweep: the safety bound only absorbs one sweep's worth of
// drift (c_m), so consecutive sweeps over one build would go stale.
template <ShapeModel S>
void relax_sweeps(std::vector<typename S::ParticleT>& particles, const PeriodicBox<S::dim>& box,
                  double c_m, double c_r, int n_l, int sweeps, Rng& rng) {
    if (particles.empty() || sweeps < 1) return;
    const double max_r = max_bounding_radius<S>(particles);
    CellGrid<S::dim> grid(box, 2.5 * max_r + c_m, max_r, c_m);
    for (int k = 0; k < sweeps; ++k) {
        build_shape_grid<S>(grid, particles);
        migrate<S>(particles, grid, c_m, c_r, n_l, rng);
    }
}

// Global relaxation after a failed growth attempt: n_k migration cycles on
// the pre-swell configuration, sizes untouched.
template <ShapeModel S>
void shake(std::vector<typename S::ParticleT>& particles, const PeriodicBox<S::dim>& box,
           const SrmParams& params, Rng& rng) {
    relax_sweeps<S>(particles, box, params.c_m, params.c_r, params.n_l, params.n_k, rng);
}

// Multiply every particle's size by (1 + c_w) in place; positions and
// orientations unchanged.
template <ShapeModel S>
void swell_all(std::vector<typename S::ParticleT>& particles, double c_w) {
    const double factor = 1.0 + c_w;
    for (auto& p : particles) S::swell(p, factor);
}

// Sort particles by cell index (row-major over cells, stable within a
// cell) so neighbors in space become neighbors in memory; ids are
// reassigned to the new array indices. Returns the remap table:
// remap[old_id] = new_id. Geometry is untouched.
template <ShapeModel S>
std::vector<int> reorder_by_locality(std::vector<typename S::ParticleT>& particles,
                                     const CellGrid<S::dim>& grid) {
    const std::size_t n = particles.size();
    std::vector<std::size_t> cell(n);
    for (std::size_t i = 0; i < n; ++i) cell[i] = grid.cell_of(S::position(particles[i]));

    // Counting sort: stable and O(n + cells).
    std::vector<std::size_t> offset(grid.cell_count() + 1, 0);
    for (std::size_t i = 0; i < n; ++i) ++offset[cell[i] + 1];
    std::partial_sum(offset.begin(), offset.end(), offset.begin());

    std::vector<int> remap(n);
    std::vector<typename S::ParticleT> sorted(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t slot = offset[cell[i]]++;
        sorted[slot] = particles[i];
        sorted[slot].id = static_cast<int>(slot);
        remap[i] = static_cast<int>(slot);
    }
    particles.swap(sorted);
    return remap;
}

// The main growth loop. Per iteration: compute the swelling factor
// (clamped on the final step so the target is hit exactly), size the grid
// from pre-swell radii, swell a working copy, then up to n_k rounds of
// (rebuild cells, migrate, global collision check). A clean round commits
// the copy; otherwise it is discarded and the pre-swell state is shaken.
// Stops when the volume fraction reaches f_target (relative 1e-12) or the
// iteration budget runs out, in which case the best state reached so far
// is returned with IterationLimitExceeded status.
template <ShapeModel S>
GenerateResult<S> srm_generate(const Snapshot<S>& initial, const SrmParams& params,
                               const ProgressSink& progress = {}) {
    constexpr int N = S::dim;
    validate_params(params);
    const PeriodicBox<N>& box = initial.box;
    double min_len = box.length(0);
    for (int a = 1; a < N; ++a) min_len = std::min(min_len, box.length(a));
    if (!(params.c_m < 0.5 * min_len))
        throw ValidationError("srm_generate: c_m must be below half the shortest box length");
    if (initial.particles.empty())
        throw ValidationError("srm_generate: initial snapshot has no particles");

    GenerateResult<S> result;
    Snapshot<S>& snap = result.snapshot;
    snap = initial;
    snap.params = params;
    snap.seed = params.seed;

    auto& P = snap.particles;
    double f = shape_volume_fraction<S>(P, box);
    const double stop = params.f_target * (1.0 - 1e-12);
    if (f < stop && params.c_w == 0.0)
        throw ValidationError("srm_generate: c_w must be positive to grow toward f_target");

    Rng rng(params.seed);
    const auto t_start = std::chrono::steady_clock::now();
    std::int64_t done = 0;
    int accepted_since_reorder = 0;
    std::vector<typename S::ParticleT> Q;

    while (f < stop) {
        if (done >= params.max_iterations) {
            result.status = GenerateStatus::IterationLimitExceeded;
            break;
        }
        ++done;

        double factor = 1.0 + params.c_w;
        if (f * std::pow(factor, N) > params.f_target)
            factor = std::pow(params.f_target / f, 1.0 / N);

        // Grid sized from pre-swell radii (the c_w <= 0.25 cap makes this
        // safe for the swollen copy it will index).
        const double max_r = max_bounding_radius<S>(P);
        CellGrid<N> grid(box, 2.5 * max_r + params.c_m, max_r * factor, params.c_m);

        Q = P;
        for (auto& q : Q) S::swell(q, factor);

        bool success = false;
        for (int k = 0; k < params.n_k; ++k) {
            build_shape_grid<S>(grid, Q);
            migrate<S>(Q, grid, params.c_m, params.c_r, params.n_l, rng);
            if (!shape_any_collision<S>(Q, grid)) {
                success = true;
                break;
            }
        }

        if (success) {
            P.swap(Q);
            f = shape_volume_fraction<S>(P, box);
            if (params.reorder_period > 0 &&
                ++accepted_since_reorder >= params.reorder_period) {
                accepted_since_reorder = 0;
                reorder_by_locality<S>(P, grid);
            }
        } else {
            for (int k = 0; k < params.n_k; ++k) {
                build_shape_grid<S>(grid, P);
                migrate<S>(P, grid, params.c_m, params.c_r, params.n_l, rng);
            }
        }

        if (progress) {
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t_start;
            progress({snap.iteration_count + done, f, success, dt.count()});
        }
    }

    snap.volume_fraction = f;
    snap.iteration_count += done;
    return result;
}

}  // namespace srm
