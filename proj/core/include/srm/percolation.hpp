#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "srm/engine.hpp"
#include "srm/geometry.hpp"
#include "srm/shape.hpp"
#include "srm/spherodisk.hpp"

namespace srm {

// One near-contact in the hard-core / soft-shell graph: particle j,
// translated by shift (in units of box lengths), lies gap away from
// particle i surface-to-surface. i == j records a particle near its own
// periodic image (shift then points along one positive axis).
struct GapEdge {
    int i = 0;
    int j = 0;
    double gap = 0.0;
    std::array<int, 3> shift{};
};

// Non-dimensional number density rho = n * D^3 / L^3 for a cubic box.
double number_density(std::size_t n, double characteristic_diameter, const PeriodicBox3& box);

// Union-find whose nodes carry integer lattice offsets relative to their
// component root (path compression composes them). Joining two nodes that
// are already connected but whose offsets disagree with the new edge's
// shift certifies a cluster that wraps the torus.
class DisplacementUnionFind {
  public:
    explicit DisplacementUnionFind(std::size_t n);

    struct Located {
        int root;
        std::array<int, 3> offset;  // lattice offset of the queried node vs root
    };
    Located find(int v);

    struct Outcome {
        bool merged = false;                // roots were distinct and got joined
        bool wrapped = false;               // already connected, offsets inconsistent
        std::array<int, 3> winding{};       // nonzero iff wrapped
    };
    // Apply the constraint "j's image offset minus i's equals shift".
    Outcome unite(int i, int j, const std::array<int, 3>& shift);

  private:
    std::vector<int> parent_;
    std::vector<std::array<int, 3>> disp_;
    std::vector<int> size_;
    std::vector<int> path_;  // scratch for iterative find
};

// All near-contact edges with gap <= delta_max: every image shift in
// {-1,0,1}^3 that realizes such a gap is emitted per pair (a pair may
// contribute several edges near box scale), plus per-axis self-image
// edges. Edges are sorted by (gap, i, j, shift). Throws DeltaMaxTooLarge
// when 2*max bounding radius + delta_max exceeds the shortest box length,
// beyond which single-step image enumeration is incomplete.
std::vector<GapEdge> gap_edges(const Snapshot<BallShape>& snap, double delta_max);
std::vector<GapEdge> gap_edges(const Snapshot<SpherodiskShape>& snap, double delta_max);

struct SpanReport {
    bool wraps = false;
    unsigned axis_mask = 0;  // bit a set iff some detected winding has component a
};

// Does the contact graph at shell thickness delta contain a cluster that
// wraps the torus along at least one axis?
SpanReport spans(const Snapshot<BallShape>& snap, double delta);
SpanReport spans(const Snapshot<SpherodiskShape>& snap, double delta);

struct CriticalDistance {
    double delta_c = 0.0;
    std::array<int, 3> winding{};
    unsigned axis_mask = 0;
};

// Exact critical shell thickness: edges are inserted in ascending gap
// order and the first insertion that certifies wrapping fixes delta_c (an
// order statistic of the gap multiset, hence bit-reproducible). Empty
// result: nothing wraps within delta_max.
std::optional<CriticalDistance> critical_percolation_distance(const Snapshot<BallShape>& snap,
                                                              double delta_max);
std::optional<CriticalDistance> critical_percolation_distance(
    const Snapshot<SpherodiskShape>& snap, double delta_max);

}  // namespace srm
