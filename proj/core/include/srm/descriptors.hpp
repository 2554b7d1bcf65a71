#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "srm/cell_grid.hpp"
#include "srm/engine.hpp"
#include "srm/errors.hpp"
#include "srm/geometry.hpp"
#include "srm/random.hpp"
#include "srm/shape.hpp"
#include "srm/spherodisk.hpp"

namespace srm {

namespace detail {

// Expanding-ring nearest-center search over a frozen grid. Starting from
// the query's cell, Chebyshev rings are visited outward; a stamp array
// deduplicates cells that alias through the periodic wrap. After ring r
// is complete every unvisited cell lies at least r full cells away along
// some axis, so the search stops once the best distance beats r times the
// smallest cell edge (strictly, so equal-distance ties in farther rings
// are still examined for the lowest-id rule).
template <int N, typename Accept>
struct RingSearcher {
    const CellGrid<N>& grid;
    std::span<const Vec<N>> centers;
    std::vector<std::uint32_t> stamp;
    std::uint32_t query_serial = 0;
    double edge_min;

    RingSearcher(const CellGrid<N>& g, std::span<const Vec<N>> c)
        : grid(g),
          centers(c),
          stamp(g.cell_count(), std::numeric_limits<std::uint32_t>::max()) {
        edge_min = grid.box().length(0) / grid.dims()[0];
        for (int a = 1; a < N; ++a)
            edge_min = std::min(edge_min, grid.box().length(a) / grid.dims()[a]);
    }

    // Returns {best squared distance, best id}; Accept(id) filters
    // candidates (e.g. excludes the query particle itself).
    std::pair<double, int> nearest(const Vec<N>& point, Accept accept) {
        const std::uint32_t serial = query_serial++;
        const auto center_cell = grid.cell_coords(point);
        double best2 = std::numeric_limits<double>::infinity();
        int best_id = -1;
        std::size_t seen = 0;
        for (int r = 0;; ++r) {
            grid.visit_ring(center_cell, r,
                            [&](std::size_t flat, const std::array<int, N>&) {
                                if (stamp[flat] == serial) return;
                                stamp[flat] = serial;
                                ++seen;
                                grid.visit_flat_cell(flat, [&](int id) {
                                    if (!accept(id)) return;
                                    const double d2 = grid.box().min_image_dist2(
                                        point, centers[static_cast<std::size_t>(id)]);
                                    if (d2 < best2 || (d2 == best2 && id < best_id)) {
                                        best2 = d2;
                                        best_id = id;
                                    }
                                });
                            });
            if (seen == grid.cell_count()) break;
            const double bound = static_cast<double>(r) * edge_min;
            if (best_id >= 0 && best2 < bound * bound) break;
        }
        return {best2, best_id};
    }
};

template <int N>
CellGrid<N> descriptor_grid(const PeriodicBox<N>& box, std::size_t n) {
    // Roughly one particle per cell; the grid is query-only here.
    const double cell = std::pow(box.measure() / static_cast<double>(n), 1.0 / N);
    return CellGrid<N>(box, cell);
}

}  // namespace detail

// Per-particle distance to the closest other particle center under the
// minimum image. Matches the all-pairs answer exactly; the grid only
// prunes.
template <int N>
std::vector<double> nearest_neighbor_distances(std::span<const Vec<N>> centers,
                                               const PeriodicBox<N>& box) {
    const std::size_t n = centers.size();
    if (n < 2) throw ValidationError("nearest_neighbor_distances: need at least 2 particles");
    CellGrid<N> grid = detail::descriptor_grid(box, n);
    grid.build_from([&](std::size_t i) { return centers[i]; }, n);

    std::vector<double> out(n);
    struct NotSelf {
        int self;
        bool operator()(int id) const { return id != self; }
    };
    detail::RingSearcher<N, NotSelf> search(grid, centers);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [d2, id] = search.nearest(centers[i], NotSelf{static_cast<int>(i)});
        out[i] = std::sqrt(d2);
    }
    return out;
}

template <ShapeModel S>
std::vector<double> nearest_neighbor_distances(const Snapshot<S>& snap) {
    std::vector<Vec<S::dim>> centers(snap.particles.size());
    for (std::size_t i = 0; i < centers.size(); ++i) centers[i] = S::position(snap.particles[i]);
    return nearest_neighbor_distances<S::dim>(centers, snap.box);
}

struct LocalVolumeFractions {
    std::vector<double> value;       // NaN where hits == 0
    std::vector<std::int64_t> hits;  // Monte Carlo samples landing closest to each particle
    std::vector<std::uint8_t> reliable;  // 0 when hits < 100 (estimate too noisy)
    std::int64_t sample_count = 0;
};

inline std::int64_t default_lvf_samples(std::size_t n) {
    const std::int64_t want = static_cast<std::int64_t>(n) * 100000;
    return std::min<std::int64_t>(want, 1000000000);
}

// Monte Carlo Voronoi measures: uniform sample points are assigned to
// their nearest particle center (minimum image, ties to the lowest id)
// and each particle's cell measure is its hit share of the box. The local
// volume fraction is then particle measure over cell measure.
template <ShapeModel S>
LocalVolumeFractions local_volume_fractions(const Snapshot<S>& snap, std::int64_t sample_count,
                                            Rng& rng) {
    constexpr int N = S::dim;
    const auto& ps = snap.particles;
    const std::size_t n = ps.size();
    if (n == 0) throw ValidationError("local_volume_fractions: empty snapshot");
    if (sample_count < 1) throw ValidationError("local_volume_fractions: need sample_count >= 1");

    std::vector<Vec<N>> centers(n);
    for (std::size_t i = 0; i < n; ++i) centers[i] = S::position(ps[i]);
    CellGrid<N> grid = detail::descriptor_grid(snap.box, n);
    grid.build_from([&](std::size_t i) { return centers[i]; }, n);

    struct All {
        bool operator()(int) const { return true; }
    };
    detail::RingSearcher<N, All> search(grid, centers);

    LocalVolumeFractions out;
    out.sample_count = sample_count;
    out.hits.assign(n, 0);
    for (std::int64_t s = 0; s < sample_count; ++s) {
        const Vec<N> p = random_point(rng, snap.box);
        const auto [d2, id] = search.nearest(p, All{});
        ++out.hits[static_cast<std::size_t>(id)];
    }

    out.value.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.reliable.assign(n, 0);
    const double box_measure = snap.box.measure();
    for (std::size_t i = 0; i < n; ++i) {
        if (out.hits[i] == 0) continue;
        const double cell_measure =
            box_measure * static_cast<double>(out.hits[i]) / static_cast<double>(sample_count);
        out.value[i] = S::measure(ps[i]) / cell_measure;
        out.reliable[i] = out.hits[i] >= 100 ? 1 : 0;
    }
    return out;
}

struct NematicOrder {
    std::vector<double> value;  // mean |n_i . n_j| over neighbors; NaN when none
    std::vector<int> neighbor_count;
};

// Local alignment: per platelet, the mean absolute normal-normal dot
// product over all platelets within the center-distance cutoff. 1 for a
// parallel stack, 0.5 for isotropic orientations.
inline NematicOrder local_nematic_order(const Snapshot<SpherodiskShape>& snap, double cutoff) {
    if (!(cutoff > 0.0)) throw ValidationError("local_nematic_order: cutoff must be positive");
    const auto& ps = snap.particles;
    const std::size_t n = ps.size();
    CellGrid<3> grid(snap.box, cutoff);
    grid.build_from([&](std::size_t i) { return ps[i].pos; }, n);

    NematicOrder out;
    out.value.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.neighbor_count.assign(n, 0);
    const double cut2 = cutoff * cutoff;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        int cnt = 0;
        grid.visit_neighborhood(ps[i].pos, [&](int id) {
            const std::size_t j = static_cast<std::size_t>(id);
            if (j == i) return false;
            if (snap.box.min_image_dist2(ps[i].pos, ps[j].pos) <= cut2) {
                acc += std::abs(ps[i].normal.dot(ps[j].normal));
                ++cnt;
            }
            return false;
        });
        out.neighbor_count[i] = cnt;
        if (cnt > 0) out.value[i] = acc / cnt;
    }
    return out;
}

inline double default_alignment_cutoff(const Snapshot<SpherodiskShape>& snap) {
    double d = 0.0;
    for (const auto& p : snap.particles) d = std::max(d, p.diameter);
    return 1.5 * d;
}

// Mean over finite entries; NaN when no entry is finite.
inline double finite_mean(std::span<const double> values) {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (double v : values)
        if (std::isfinite(v)) {
            acc += v;
            ++cnt;
        }
    return cnt ? acc / static_cast<double>(cnt) : std::numeric_limits<double>::quiet_NaN();
}

inline double finite_stddev(std::span<const double> values) {
    const double mean = finite_mean(values);
    if (!std::isfinite(mean)) return mean;
    double acc = 0.0;
    std::size_t cnt = 0;
    for (double v : values)
        if (std::isfinite(v)) {
            acc += (v - mean) * (v - mean);
            ++cnt;
        }
    return cnt > 1 ? std::sqrt(acc / static_cast<double>(cnt - 1)) : 0.0;
}

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::int64_t> counts;
    std::vector<double> density;  // counts / (finite total * bin width)
    std::int64_t total = 0;       // finite values seen
    std::int64_t in_range = 0;
};

// Fixed-range histogram over [lo, hi]; the top edge is inclusive.
// Non-finite values are ignored entirely; density integrates to the
// in-range fraction of the finite values.
inline Histogram histogram(std::span<const double> values, int bin_count, double lo, double hi) {
    if (bin_count < 1) throw ValidationError("histogram: bin_count must be >= 1");
    if (!(hi > lo)) throw ValidationError("histogram: need hi > lo");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(static_cast<std::size_t>(bin_count), 0);
    const double width = (hi - lo) / bin_count;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        ++h.total;
        if (v < lo || v > hi) continue;
        auto b = static_cast<std::int64_t>((v - lo) / width);
        if (b >= bin_count) b = bin_count - 1;
        ++h.counts[static_cast<std::size_t>(b)];
        ++h.in_range;
    }
    h.density.assign(h.counts.size(), 0.0);
    if (h.total > 0)
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            h.density[b] =
                static_cast<double>(h.counts[b]) / (static_cast<double>(h.total) * width);
    return h;
}

}  // namespace srm
