#include "srm/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "srm/cell_grid.hpp"
#include "srm/errors.hpp"

namespace srm {

double number_density(std::size_t n, double characteristic_diameter, const PeriodicBox3& box) {
    if (!box.is_cubic(1e-12))
        throw NonCubicBox("number_density: requires a cubic box");
    const double L = box.length(0);
    const double d = characteristic_diameter;
    return static_cast<double>(n) * d * d * d / (L * L * L);
}

DisplacementUnionFind::DisplacementUnionFind(std::size_t n)
    : parent_(n), disp_(n, {0, 0, 0}), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
}

DisplacementUnionFind::Located DisplacementUnionFind::find(int v) {
    path_.clear();
    int cur = v;
    while (parent_[cur] != cur) {
        path_.push_back(cur);
        cur = parent_[cur];
    }
    const int root = cur;
    // Walk back down accumulating each node's offset to the root, then
    // point it straight at the root.
    std::array<int, 3> acc{0, 0, 0};
    for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
        for (int a = 0; a < 3; ++a) acc[a] += disp_[*it][a];
        disp_[*it] = acc;
        parent_[*it] = root;
    }
    if (v == root) return {root, {0, 0, 0}};
    return {root, disp_[v]};
}

DisplacementUnionFind::Outcome DisplacementUnionFind::unite(int i, int j,
                                                            const std::array<int, 3>& shift) {
    const Located fi = find(i);
    const Located fj = find(j);
    Outcome out;
    if (fi.root == fj.root) {
        for (int a = 0; a < 3; ++a) out.winding[a] = fj.offset[a] - fi.offset[a] - shift[a];
        out.wrapped = out.winding != std::array<int, 3>{0, 0, 0};
        return out;
    }
    // Attach the smaller tree; the new root-to-root offset keeps
    // X(j) - X(i) = shift satisfied.
    out.merged = true;
    if (size_[fi.root] >= size_[fj.root]) {
        parent_[fj.root] = fi.root;
        for (int a = 0; a < 3; ++a) disp_[fj.root][a] = fi.offset[a] + shift[a] - fj.offset[a];
        size_[fi.root] += size_[fj.root];
    } else {
        parent_[fi.root] = fj.root;
        for (int a = 0; a < 3; ++a) disp_[fi.root][a] = fj.offset[a] - shift[a] - fi.offset[a];
        size_[fj.root] += size_[fi.root];
    }
    return out;
}

namespace {

// Shared edge construction: candidate pairs come from a cell grid sized to
// the interaction reach, then every image shift is screened analytically.
// GapFn(i, j, d) returns the surface gap for center offset d; CullR(i, j)
// bounds the center distance beyond which the gap surely exceeds
// delta_max.
template <typename P, typename BoundFn, typename CullFn, typename GapFn>
std::vector<GapEdge> build_edges(const std::vector<P>& ps, const PeriodicBox3& box,
                                 double delta_max, BoundFn bound, CullFn cull_radius,
                                 GapFn gap_fn) {
    if (!(delta_max > 0.0))
        throw ValidationError("gap_edges: delta_max must be positive");
    double max_bound = 0.0;
    for (const auto& p : ps) max_bound = std::max(max_bound, bound(p));
    double min_len = box.length(0);
    for (int a = 1; a < 3; ++a) min_len = std::min(min_len, box.length(a));
    if (ps.size() > 1 && 2.0 * max_bound + delta_max > min_len)
        throw DeltaMaxTooLarge(
            "gap_edges: 2*max bounding radius + delta_max exceeds the shortest box length");

    std::vector<GapEdge> edges;

    // Self-image contacts: one candidate per axis; diagonal images are
    // strictly farther and certify no additional axis first.
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (int a = 0; a < 3; ++a) {
            Vec3 d{};
            d[a] = box.length(a);
            const double g = gap_fn(i, i, d);
            if (g <= delta_max) {
                std::array<int, 3> s{0, 0, 0};
                s[a] = 1;
                edges.push_back({static_cast<int>(i), static_cast<int>(i), g, s});
            }
        }
    }

    CellGrid<3> grid(box, 2.0 * max_bound + delta_max);
    grid.build_from([&](std::size_t k) { return ps[k].pos; }, ps.size());

    for (std::size_t i = 0; i < ps.size(); ++i) {
        grid.visit_neighborhood(ps[i].pos, [&](int jj) {
            const std::size_t j = static_cast<std::size_t>(jj);
            if (j <= i) return false;
            const double reach = cull_radius(i, j) + delta_max;
            for (int sx = -1; sx <= 1; ++sx)
                for (int sy = -1; sy <= 1; ++sy)
                    for (int sz = -1; sz <= 1; ++sz) {
                        Vec3 d;
                        d[0] = (ps[j].pos[0] - ps[i].pos[0]) + sx * box.length(0);
                        d[1] = (ps[j].pos[1] - ps[i].pos[1]) + sy * box.length(1);
                        d[2] = (ps[j].pos[2] - ps[i].pos[2]) + sz * box.length(2);
                        if (d.norm2() > reach * reach) continue;
                        const double g = gap_fn(i, j, d);
                        if (g <= delta_max)
                            edges.push_back({static_cast<int>(i), static_cast<int>(j), g,
                                             {sx, sy, sz}});
                    }
            return false;
        });
    }

    std::sort(edges.begin(), edges.end(), [](const GapEdge& a, const GapEdge& b) {
        return std::tie(a.gap, a.i, a.j, a.shift) < std::tie(b.gap, b.i, b.j, b.shift);
    });
    return edges;
}

unsigned mask_of(const std::array<int, 3>& w) {
    unsigned m = 0;
    for (int a = 0; a < 3; ++a)
        if (w[a] != 0) m |= 1u << a;
    return m;
}

SpanReport spans_impl(std::size_t n, const std::vector<GapEdge>& edges) {
    DisplacementUnionFind uf(n);
    SpanReport rep;
    for (const auto& e : edges) {
        const auto out = uf.unite(e.i, e.j, e.shift);
        if (out.wrapped) {
            rep.wraps = true;
            rep.axis_mask |= mask_of(out.winding);
        }
    }
    return rep;
}

std::optional<CriticalDistance> critical_impl(std::size_t n, const std::vector<GapEdge>& edges) {
    DisplacementUnionFind uf(n);
    for (const auto& e : edges) {
        const auto out = uf.unite(e.i, e.j, e.shift);
        if (out.wrapped) return CriticalDistance{e.gap, out.winding, mask_of(out.winding)};
    }
    return std::nullopt;
}

}  // namespace

std::vector<GapEdge> gap_edges(const Snapshot<BallShape>& snap, double delta_max) {
    const auto& ps = snap.particles;
    return build_edges(
        ps, snap.box, delta_max, [](const Sphere& p) { return p.radius; },
        [&](std::size_t i, std::size_t j) { return ps[i].radius + ps[j].radius; },
        [&](std::size_t i, std::size_t j, const Vec3& d) {
            return d.norm() - ps[i].radius - ps[j].radius;
        });
}

std::vector<GapEdge> gap_edges(const Snapshot<SpherodiskShape>& snap, double delta_max) {
    const auto& ps = snap.particles;
    return build_edges(
        ps, snap.box, delta_max,
        [](const Spherodisk& p) { return SpherodiskShape::bounding_radius(p); },
        [&](std::size_t i, std::size_t j) {
            return 0.5 * (ps[i].diameter + ps[j].diameter + ps[i].thickness + ps[j].thickness);
        },
        [&](std::size_t i, std::size_t j, const Vec3& d) {
            const double dist = disk_disk_distance(Vec3{}, ps[i].normal, medial_radius(ps[i]), d,
                                                   ps[j].normal, medial_radius(ps[j]));
            return dist - 0.5 * (ps[i].thickness + ps[j].thickness);
        });
}

SpanReport spans(const Snapshot<BallShape>& snap, double delta) {
    return spans_impl(snap.particles.size(), gap_edges(snap, delta));
}

SpanReport spans(const Snapshot<SpherodiskShape>& snap, double delta) {
    return spans_impl(snap.particles.size(), gap_edges(snap, delta));
}

std::optional<CriticalDistance> critical_percolation_distance(const Snapshot<BallShape>& snap,
                                                              double delta_max) {
    return critical_impl(snap.particles.size(), gap_edges(snap, delta_max));
}

std::optional<CriticalDistance> critical_percolation_distance(
    const Snapshot<SpherodiskShape>& snap, double delta_max) {
    return critical_impl(snap.particles.size(), gap_edges(snap, delta_max));
}

}  // namespace srm
