#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "srm/geometry.hpp"

namespace srm {

// Uniform cell partition of a periodic box. Cells are stored as a
// head/next linked list (head per cell, next per particle id), which gives
// O(N) full rebuilds, O(1) single inserts and deterministic traversal
// order without per-cell allocations.
//
// Correctness bound: a 3-wide neighborhood scan finds every pair closer
// than cell_size, provided positions have drifted at most `slack` from
// where they were indexed and cell_size >= 2*max_radius + slack. The
// constructor enforces that bound; axis counts are clamped to >= 3 so the
// scan degenerates to the whole grid when the box is only a few cells
// wide.
template <int N>
class CellGrid {
  public:
    // Safety-checked constructor for grids that index live, moving
    // particles: cell_size must cover two bounding radii plus the largest
    // displacement since the last rebuild.
    CellGrid(const PeriodicBox<N>& box, double cell_size, double max_radius, double slack)
        : CellGrid(box, cell_size) {
        const double min_safe = 2.0 * max_radius + slack;
        if (cell_size < min_safe)
            throw std::invalid_argument("CellGrid: cell_size below safety bound 2*maxR + slack");
    }

    // Unchecked variant for read-only queries over frozen snapshots where
    // the caller picks the interaction range itself.
    CellGrid(const PeriodicBox<N>& box, double cell_size) : box_(&box), cell_size_(cell_size) {
        if (!(cell_size > 0.0)) throw std::invalid_argument("CellGrid: cell_size must be positive");
        ncells_ = 1;
        for (int a = 0; a < N; ++a) {
            const double L = box.length(a);
            int n = static_cast<int>(std::floor(L / cell_size));
            if (n < 3) n = 3;
            dims_[a] = n;
            edge_[a] = L / n;
            ncells_ *= static_cast<std::size_t>(n);
        }
        head_.assign(ncells_, -1);
    }

    const std::array<int, N>& dims() const { return dims_; }
    double cell_size() const { return cell_size_; }
    std::size_t cell_count() const { return ncells_; }
    const PeriodicBox<N>& box() const { return *box_; }

    // Per-axis cell coordinates for an arbitrary position. floor plus
    // double-modulo, so slightly negative or >= L coordinates (rounding
    // artifacts of wrap) land in the correct periodic cell.
    std::array<int, N> cell_coords(const Vec<N>& p) const {
        std::array<int, N> c;
        for (int a = 0; a < N; ++a) {
            int i = static_cast<int>(std::floor(p[a] / edge_[a]));
            i %= dims_[a];
            if (i < 0) i += dims_[a];
            c[a] = i;
        }
        return c;
    }

    // Row-major flat index: x fastest, then y, then z.
    std::size_t flat_index(const std::array<int, N>& c) const {
        std::size_t idx = 0;
        for (int a = N - 1; a >= 0; --a)
            idx = idx * static_cast<std::size_t>(dims_[a]) + static_cast<std::size_t>(c[a]);
        return idx;
    }

    std::size_t cell_of(const Vec<N>& p) const { return flat_index(cell_coords(p)); }

    void clear(std::size_t particle_count) {
        head_.assign(ncells_, -1);
        next_.assign(particle_count, -1);
    }

    // Insert one id at the front of its cell list.
    void insert(int id, const Vec<N>& pos) {
        const std::size_t c = cell_of(pos);
        if (static_cast<std::size_t>(id) >= next_.size()) next_.resize(id + 1, -1);
        next_[static_cast<std::size_t>(id)] = head_[c];
        head_[c] = id;
    }

    // Full rebuild over a particle span; ids are array indices.
    void build(std::span<const Particle<N>> particles) {
        clear(particles.size());
        for (std::size_t i = 0; i < particles.size(); ++i)
            insert(static_cast<int>(i), particles[i].pos);
    }

    // Full rebuild over count positions supplied by a callable.
    template <typename PosFn>
    void build_from(PosFn&& position_of, std::size_t count) {
        clear(count);
        for (std::size_t i = 0; i < count; ++i) insert(static_cast<int>(i), position_of(i));
    }

    // Visit every id in the 3-wide neighborhood of the cell containing p.
    // Axis counts >= 3 guarantee the offset cells are pairwise distinct, so
    // no id is visited twice. Visitor returns true to stop early; the
    // function returns whether it stopped.
    template <typename Visitor>
    bool visit_neighborhood(const Vec<N>& p, Visitor&& visit) const {
        const std::array<int, N> c = cell_coords(p);
        std::array<int, N> o{};
        return scan_axis(c, o, 0, visit);
    }

    // Ring r of the Chebyshev neighborhood (max |offset| = r), used by the
    // nearest-neighbor search. Offsets are reduced mod dims, and cells
    // already covered by smaller rings on a short axis are skipped via the
    // caller's stamp set, not here.
    template <typename Visitor>
    void visit_ring(const std::array<int, N>& center, int r, Visitor&& visit) const {
        std::array<int, N> o{};
        ring_axis(center, o, 0, r, false, visit);
    }

    template <typename Visitor>
    void visit_flat_cell(std::size_t flat, Visitor&& visit) const {
        for (int id = head_[flat]; id >= 0; id = next_[static_cast<std::size_t>(id)]) visit(id);
    }

  private:
    template <typename Visitor>
    bool scan_axis(const std::array<int, N>& c, std::array<int, N>& o, int axis,
                   Visitor& visit) const {
        if (axis == N) {
            std::array<int, N> m;
            for (int a = 0; a < N; ++a) {
                int i = c[a] + o[a];
                if (i < 0) i += dims_[a];
                if (i >= dims_[a]) i -= dims_[a];
                m[a] = i;
            }
            for (int id = head_[flat_index(m)]; id >= 0; id = next_[static_cast<std::size_t>(id)])
                if (visit(id)) return true;
            return false;
        }
        for (int d = -1; d <= 1; ++d) {
            o[axis] = d;
            if (scan_axis(c, o, axis + 1, visit)) return true;
        }
        return false;
    }

    template <typename Visitor>
    void ring_axis(const std::array<int, N>& c, std::array<int, N>& o, int axis, int r,
                   bool boundary, Visitor& visit) const {
        if (axis == N) {
            if (!boundary) return;  // interior cells belong to smaller rings
            visit_cell_offset(c, o, visit);
            return;
        }
        for (int d = -r; d <= r; ++d) {
            o[axis] = d;
            ring_axis(c, o, axis + 1, r, boundary || d == -r || d == r, visit);
        }
    }

    template <typename Visitor>
    void visit_cell_offset(const std::array<int, N>& c, const std::array<int, N>& o,
                           Visitor& visit) const {
        std::array<int, N> m;
        for (int a = 0; a < N; ++a) {
            int i = (c[a] + o[a]) % dims_[a];
            if (i < 0) i += dims_[a];
            m[a] = i;
        }
        visit(flat_index(m), m);
    }

    const PeriodicBox<N>* box_;
    double cell_size_;
    std::array<int, N> dims_{};
    std::array<double, N> edge_{};
    std::size_t ncells_ = 0;
    std::vector<int> head_;
    std::vector<int> next_;
};

// True iff some particle t with t.id != q.id within the 3-wide cell
// neighborhood of q's position touches or overlaps q (min-image distance
// <= sum of radii). Compares squared distances.
template <int N>
bool check_particle_collision(const Particle<N>& q, std::span<const Particle<N>> particles,
                              const CellGrid<N>& grid) {
    const PeriodicBox<N>& box = grid.box();
    return grid.visit_neighborhood(q.pos, [&](int id) {
        const Particle<N>& t = particles[static_cast<std::size_t>(id)];
        if (t.id == q.id) return false;
        const double rr = q.radius + t.radius;
        return box.min_image_dist2(q.pos, t.pos) <= rr * rr;
    });
}

// True iff any indexed particle overlaps another; short-circuits.
template <int N>
bool check_any_collision(std::span<const Particle<N>> particles, const CellGrid<N>& grid) {
    for (const auto& p : particles)
        if (check_particle_collision(p, particles, grid)) return true;
    return false;
}

}  // namespace srm
