#pragma once

#include <cstdint>
#include <string>

#include "srm/engine.hpp"
#include "srm/snapshots.hpp"

namespace srm {

enum class ShapeKind { Disk, Sphere, Spherodisk };

// Named parameter regimes. Equilibrium/clustered apply to disks and
// spheres; hoc, quasi_nematic, stacked and rsa are platelet pipelines.
enum class RecipeKind { None, Equilibrium, Clustered, Hoc, QuasiNematic, Stacked, Rsa };

std::string to_string(ShapeKind kind);
std::string to_string(RecipeKind kind);
ShapeKind shape_from_string(const std::string& s);
RecipeKind recipe_from_string(const std::string& s);

// Calibrated parameter presets for disk/sphere runs. Equilibrium-like
// configurations use slow growth with wide migration plus extra
// relaxation sweeps at the target fraction; clustered ones grow fast
// while migration stays short-ranged, freezing contact clumps in.
struct SphericalPreset {
    SrmParams params;
    int relax_rounds = 0;  // post-target relaxation sweeps
};
SphericalPreset spherical_preset(RecipeKind kind, int dimension, std::int64_t n, double f_target,
                                 double box_measure);

// Swept-solid volume at diameter 1 and thickness 1/aspect_ratio; the
// volume fraction of n platelets at number density rho is rho times this
// regardless of the box edge.
double spherodisk_unit_volume(double aspect_ratio);
double rho_to_volume_fraction(double rho, double aspect_ratio);

// Cubic box edge holding n unit-diameter platelets at number density rho.
double rho_box_edge(std::int64_t n, double rho);

// Sequential random placement of platelets with uniform random positions
// and orientations.
PlateletSnapshot rsa_platelets(std::int64_t n, double diameter, double aspect_ratio,
                               const PeriodicBox3& box, std::size_t max_attempts, Rng& rng);

struct PlateletRunReport {
    GenerateStatus status = GenerateStatus::Converged;
    int relax_sweeps = 0;       // sweeps spent in the quasi-nematic stage
    double final_alignment = 0; // mean local alignment at the end (NaN if unmeasured)
};

// End-to-end platelet pipelines (diameter normalized to 1 at the target
// density):
//   hoc           dilute random start grown with fast swelling and short
//                 migration, keeping orientations disordered
//   quasi_nematic an hoc run relaxed at fixed size with long migration
//                 and rotation until the local alignment plateaus
//   stacked       a quasi-nematic state densified further toward the
//                 requested (higher) density
//   rsa           plain sequential placement at the target density
PlateletSnapshot generate_platelet_recipe(RecipeKind kind, std::int64_t n, double aspect_ratio,
                                          double rho_target, std::uint64_t seed,
                                          const ProgressSink& progress = {},
                                          PlateletRunReport* report = nullptr);

}  // namespace srm
