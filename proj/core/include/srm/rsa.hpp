#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "srm/cell_grid.hpp"
#include "srm/errors.hpp"
#include "srm/geometry.hpp"
#include "srm/random.hpp"

namespace srm {

inline constexpr std::size_t kRsaDefaultAttempts = 10000;

// Random sequential adsorption with per-particle radii. Candidates are
// drawn uniformly over the box and rejected through the same cell-grid
// collision path the engine uses. Accepted particles never touch:
// min-image distance strictly greater than the radius sum.
template <int N>
std::vector<Particle<N>> rsa_place(std::span<const double> radii, const PeriodicBox<N>& box,
                                   std::size_t max_attempts_per_particle, Rng& rng) {
    if (radii.empty()) throw ValidationError("rsa_place: need at least one particle");
    const double max_r = *std::max_element(radii.begin(), radii.end());
    double min_len = box.length(0);
    for (int a = 1; a < N; ++a) min_len = std::min(min_len, box.length(a));
    for (double r : radii)
        if (!(r > 0.0)) throw ValidationError("rsa_place: radii must be positive");
    if (!(max_r < min_len / 4.0))
        throw ValidationError("rsa_place: radius must be below min box length / 4");

    // Same sizing as the engine's grid with zero migration slack.
    CellGrid<N> grid(box, 2.5 * max_r, max_r, 0.0);
    grid.clear(radii.size());

    std::vector<Particle<N>> placed;
    placed.reserve(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        Particle<N> cand;
        cand.id = static_cast<int>(i);
        cand.radius = radii[i];
        bool accepted = false;
        for (std::size_t attempt = 0; attempt < max_attempts_per_particle; ++attempt) {
            cand.pos = random_point(rng, box);
            if (!check_particle_collision<N>(cand, placed, grid)) {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw PlacementFailure("rsa_place: exceeded " +
                                       std::to_string(max_attempts_per_particle) +
                                       " attempts after placing " + std::to_string(i) +
                                       " particles; initial volume fraction too high",
                                   i, max_attempts_per_particle);
        placed.push_back(cand);
        grid.insert(cand.id, cand.pos);
    }
    return placed;
}

// Monodisperse convenience wrapper.
template <int N>
std::vector<Particle<N>> rsa_place(std::size_t count, double radius, const PeriodicBox<N>& box,
                                   std::size_t max_attempts_per_particle, Rng& rng) {
    std::vector<double> radii(count, radius);
    return rsa_place<N>(radii, box, max_attempts_per_particle, rng);
}

}  // namespace srm
