// Run configuration: JSON description of one generation run, resolved
// against recipe presets into a fully validated parameter set.
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "srm/engine.hpp"
#include "srm/recipes.hpp"
#include "srm/snapshots.hpp"

namespace srm {

struct RunConfig {
    ShapeKind shape = ShapeKind::Sphere;
    int dimension = 3;
    std::int64_t count = 0;
    RecipeKind recipe = RecipeKind::None;

    // Spherodisk-only geometry; zero and NaN mean "not set" for the others.
    double aspect_ratio = 0.0;
    double rho_target = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> box_lengths;  // resolved, size == dimension
    SrmParams params;                 // resolved, includes f_target and seed
    int relax_rounds = 0;             // post-target mixing sweeps (disk/sphere)
};

// Parses and resolves a config document. Unknown keys are rejected.
//
// Recognized keys:
//   shape      "disk" | "sphere" | "spherodisk"        (required)
//   count      integer >= 1                            (required)
//   dimension  2 or 3; optional, must match the shape
//   recipe     "none" | "equilibrium" | "clustered" (disk/sphere)
//              "hoc" | "quasi_nematic" | "stacked" | "rsa" (spherodisk)
//   f_target   number in (0,1)
//   rho_target number > 0, spherodisk only; exactly one of f/rho per run,
//              f_target defaulting to 0.5 for disk/sphere when neither given
//   aspect_ratio  number > 1, spherodisk only (required there)
//   box        edge length or per-axis array; disk/sphere only (the
//              spherodisk box is derived from rho_target); default unit box
//   seed       unsigned integer, default 1
//   params     object overriding c_w, c_m, c_r, n_k, n_l, max_iterations,
//              reorder_period; rejected for spherodisk recipes, which manage
//              their own staged parameters
RunConfig parse_run_config(const nlohmann::json& doc);

// Reads the file at `path` and parses it. Throws IoError on read or JSON
// syntax failure, ValidationError on contract violations.
RunConfig load_run_config(const std::string& path);

// Echo of the fully resolved configuration, suitable for run logs.
nlohmann::json resolved_config_json(const RunConfig& cfg);

struct RunResult {
    std::variant<DiskSnapshot, SphereSnapshot, PlateletSnapshot> snapshot;
    GenerateStatus status = GenerateStatus::Converged;
    PlateletRunReport platelet_report;  // meaningful for spherodisk runs
};

// Executes a resolved config end to end: placement, growth, and any
// recipe-specific relaxation. `seed_override`, when nonzero, replaces the
// configured seed (CLI --seed).
RunResult execute_run(const RunConfig& cfg, const ProgressSink& progress = {},
                      std::uint64_t seed_override = 0);

}  // namespace srm
