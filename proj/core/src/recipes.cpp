#include "srm/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "srm/cell_grid.hpp"
#include "srm/descriptors.hpp"
#include "srm/errors.hpp"
#include "srm/rsa.hpp"

namespace srm {

std::string to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Disk: return "disk";
        case ShapeKind::Sphere: return "sphere";
        case ShapeKind::Spherodisk: return "spherodisk";
    }
    return "?";
}

std::string to_string(RecipeKind kind) {
    switch (kind) {
        case RecipeKind::None: return "none";
        case RecipeKind::Equilibrium: return "equilibrium";
        case RecipeKind::Clustered: return "clustered";
        case RecipeKind::Hoc: return "hoc";
        case RecipeKind::QuasiNematic: return "quasi_nematic";
        case RecipeKind::Stacked: return "stacked";
        case RecipeKind::Rsa: return "rsa";
    }
    return "?";
}

ShapeKind shape_from_string(const std::string& s) {
    if (s == "disk") return ShapeKind::Disk;
    if (s == "sphere") return ShapeKind::Sphere;
    if (s == "spherodisk") return ShapeKind::Spherodisk;
    throw ValidationError("unknown shape '" + s + "' (disk, sphere, spherodisk)");
}

RecipeKind recipe_from_string(const std::string& s) {
    if (s == "none") return RecipeKind::None;
    if (s == "equilibrium") return RecipeKind::Equilibrium;
    if (s == "clustered") return RecipeKind::Clustered;
    if (s == "hoc") return RecipeKind::Hoc;
    if (s == "quasi_nematic") return RecipeKind::QuasiNematic;
    if (s == "stacked") return RecipeKind::Stacked;
    if (s == "rsa") return RecipeKind::Rsa;
    throw ValidationError("unknown recipe '" + s +
                          "' (none, equilibrium, clustered, hoc, quasi_nematic, stacked, rsa)");
}

SphericalPreset spherical_preset(RecipeKind kind, int dimension, std::int64_t n, double f_target,
                                 double box_measure) {
    if (n < 1) throw ValidationError("preset: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double r_target =
        dimension == 2
            ? std::sqrt(f_target * box_measure / (nn * std::numbers::pi))
            : std::cbrt(f_target * box_measure * 3.0 / (nn * 4.0 * std::numbers::pi));

    SphericalPreset preset;
    SrmParams& p = preset.params;
    p.f_target = f_target;
    p.n_k = 10;
    p.n_l = 10;
    switch (kind) {
        case RecipeKind::Equilibrium:
            // Slow growth, wide moves, then a long fixed-size mixing phase:
            // the result forgets the growth history.
            p.c_w = 0.02;
            p.c_m = 1.0 * r_target;
            preset.relax_rounds = 200;
            break;
        case RecipeKind::Clustered:
            // Fast growth against short moves: particles jam against their
            // first neighbors and contact clumps survive to the target.
            p.c_w = 0.08;
            p.c_m = 0.15 * r_target;
            preset.relax_rounds = 0;
            break;
        default:
            throw ValidationError("recipe '" + to_string(kind) +
                                  "' does not apply to disks/spheres");
    }
    return preset;
}

double spherodisk_unit_volume(double aspect_ratio) {
    Spherodisk p;
    p.diameter = 1.0;
    p.thickness = 1.0 / aspect_ratio;
    return spherodisk_measure(p);
}

double rho_to_volume_fraction(double rho, double aspect_ratio) {
    return rho * spherodisk_unit_volume(aspect_ratio);
}

double rho_box_edge(std::int64_t n, double rho) {
    return std::cbrt(static_cast<double>(n) / rho);
}

PlateletSnapshot rsa_platelets(std::int64_t n, double diameter, double aspect_ratio,
                               const PeriodicBox3& box, std::size_t max_attempts, Rng& rng) {
    if (n < 1) throw ValidationError("rsa_platelets: n must be >= 1");
    if (!(aspect_ratio > 1.0))
        throw ValidationError("rsa_platelets: aspect ratio must exceed 1");
    const double thickness = diameter / aspect_ratio;
    const double bound = 0.5 * (diameter + thickness);
    double min_len = box.length(0);
    for (int a = 1; a < 3; ++a) min_len = std::min(min_len, box.length(a));
    if (!(bound < min_len / 4.0))
        throw ValidationError("rsa_platelets: platelet too large for the box");

    PlateletSnapshot snap;
    snap.box = box;
    snap.particles.reserve(static_cast<std::size_t>(n));

    CellGrid<3> grid(box, 2.5 * bound, bound, 0.0);
    grid.clear(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        Spherodisk cand;
        cand.id = static_cast<int>(i);
        cand.diameter = diameter;
        cand.thickness = thickness;
        bool accepted = false;
        for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
            cand.pos = random_point(rng, box);
            cand.normal = random_unit_vector<3>(rng);
            if (!shape_collides<SpherodiskShape>(cand, snap.particles, grid)) {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw PlacementFailure("rsa_platelets: exceeded attempt budget at particle " +
                                       std::to_string(i),
                                   static_cast<std::size_t>(i), max_attempts);
        snap.particles.push_back(cand);
        grid.insert(cand.id, cand.pos);
    }
    snap.refresh_volume_fraction();
    return snap;
}

namespace {

double mean_alignment(const PlateletSnapshot& snap) {
    const auto order = local_nematic_order(snap, default_alignment_cutoff(snap));
    return finite_mean(order.value);
}

}  // namespace

PlateletSnapshot generate_platelet_recipe(RecipeKind kind, std::int64_t n, double aspect_ratio,
                                          double rho_target, std::uint64_t seed,
                                          const ProgressSink& progress,
                                          PlateletRunReport* report) {
    if (!(rho_target > 0.0)) throw ValidationError("platelet recipe: rho_target must be > 0");
    if (!(aspect_ratio > 1.0))
        throw ValidationError("platelet recipe: aspect ratio must exceed 1");
    if (kind == RecipeKind::None || kind == RecipeKind::Equilibrium ||
        kind == RecipeKind::Clustered)
        throw ValidationError("recipe '" + to_string(kind) + "' does not apply to platelets");

    PlateletRunReport local_report;
    PlateletRunReport& rep = report ? *report : local_report;
    rep.final_alignment = std::numeric_limits<double>::quiet_NaN();

    const double L = rho_box_edge(n, rho_target);
    const PeriodicBox3 box = PeriodicBox3::cube(L);
    const double f_final = rho_to_volume_fraction(rho_target, aspect_ratio);

    if (kind == RecipeKind::Rsa) {
        Rng rng(mix_seed(seed, 1));
        PlateletSnapshot snap = rsa_platelets(n, 1.0, aspect_ratio, box, kRsaDefaultAttempts, rng);
        snap.seed = seed;
        snap.params.f_target = f_final;
        snap.params.seed = seed;
        rep.final_alignment = mean_alignment(snap);
        return snap;
    }

    // Densification passes through an intermediate density for the stacked
    // pipeline; hoc and quasi_nematic go straight to the target.
    const double rho_mid = kind == RecipeKind::Stacked ? std::min(5.0, rho_target) : rho_target;
    const double f_mid = rho_to_volume_fraction(rho_mid, aspect_ratio);
    const double rho_start = std::min(0.7 * rho_mid, 3.5);
    const double d_start = std::cbrt(rho_start / rho_target);

    Rng rsa_rng(mix_seed(seed, 1));
    PlateletSnapshot snap =
        rsa_platelets(n, d_start, aspect_ratio, box, kRsaDefaultAttempts, rsa_rng);

    // The network character lives in the gap scale, which tracks the trial
    // step length: conflicted platelets land wherever a step first clears,
    // so fine steps wedge the web at fine gaps. Each swell is kept just
    // below what those steps can resolve, and migration stays well over an
    // order of magnitude below the relaxation moves used downstream, so
    // growth quenches contacts instead of annealing them away.
    SrmParams grow;
    grow.c_w = 0.008;
    grow.c_m = 0.01;
    grow.c_r = 0.012;
    grow.n_k = 20;
    grow.n_l = 20;
    grow.f_target = f_mid;
    grow.max_iterations = 200000;
    grow.seed = mix_seed(seed, 2);
    auto grown = srm_generate<SpherodiskShape>(snap, grow, progress);
    rep.status = grown.status;
    snap = std::move(grown.snapshot);

    if (kind != RecipeKind::Hoc) {
        // Fixed-size relaxation with long translation and rotation steps;
        // stops when the mean local alignment plateaus.
        constexpr double kRelaxMove = 0.3;
        constexpr double kRelaxTurn = 0.35;
        constexpr int kWindow = 50;
        constexpr int kMaxSweeps = 1200;
        Rng relax_rng(mix_seed(seed, 3));
        std::deque<double> window;
        int sweep = 0;
        while (sweep < kMaxSweeps) {
            relax_sweeps<SpherodiskShape>(snap.particles, box, kRelaxMove, kRelaxTurn, grow.n_l,
                                          1, relax_rng);
            ++sweep;
            window.push_back(mean_alignment(snap));
            if (window.size() > kWindow) window.pop_front();
            if (window.size() == kWindow &&
                *std::max_element(window.begin(), window.end()) -
                        *std::min_element(window.begin(), window.end()) <
                    1e-3)
                break;
        }
        rep.relax_sweeps = sweep;

        if (kind == RecipeKind::Stacked && f_final > snap.volume_fraction) {
            SrmParams stack;
            stack.c_w = 0.02;
            stack.c_m = 0.1;
            stack.c_r = 0.1;
            stack.n_k = 10;
            stack.n_l = 10;
            stack.f_target = f_final;
            stack.max_iterations = 400000;
            stack.seed = mix_seed(seed, 4);
            auto stacked = srm_generate<SpherodiskShape>(snap, stack, progress);
            if (stacked.status != GenerateStatus::Converged) rep.status = stacked.status;
            snap = std::move(stacked.snapshot);
        }
    }

    rep.final_alignment = mean_alignment(snap);
    snap.seed = seed;
    snap.refresh_volume_fraction();
    return snap;
}

}  // namespace srm
