#include "srm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "srm/errors.hpp"
#include "srm/rsa.hpp"

namespace srm {
namespace {

const nlohmann::json* find(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double as_number(const nlohmann::json& v, const char* key) {
    if (!v.is_number())
        throw ValidationError(std::string("config: ") + key + " must be a number");
    return v.get<double>();
}

std::int64_t as_integer(const nlohmann::json& v, const char* key) {
    if (!v.is_number_integer())
        throw ValidationError(std::string("config: ") + key + " must be an integer");
    return v.get<std::int64_t>();
}

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> known,
                         const char* where) {
    for (const auto& item : obj.items()) {
        const bool ok = std::any_of(known.begin(), known.end(),
                                    [&](const char* k) { return item.key() == k; });
        if (!ok)
            throw ValidationError(std::string("config: unknown key '") + item.key() + "' in " +
                                  where);
    }
}

void overlay_params(SrmParams& params, const nlohmann::json& obj) {
    if (!obj.is_object()) throw ValidationError("config: params must be an object");
    reject_unknown_keys(obj, {"c_w", "c_m", "c_r", "n_k", "n_l", "max_iterations",
                              "reorder_period"},
                        "params");
    if (const auto* v = find(obj, "c_w")) params.c_w = as_number(*v, "params.c_w");
    if (const auto* v = find(obj, "c_m")) params.c_m = as_number(*v, "params.c_m");
    if (const auto* v = find(obj, "c_r")) params.c_r = as_number(*v, "params.c_r");
    if (const auto* v = find(obj, "n_k"))
        params.n_k = static_cast<int>(as_integer(*v, "params.n_k"));
    if (const auto* v = find(obj, "n_l"))
        params.n_l = static_cast<int>(as_integer(*v, "params.n_l"));
    if (const auto* v = find(obj, "max_iterations"))
        params.max_iterations = as_integer(*v, "params.max_iterations");
    if (const auto* v = find(obj, "reorder_period"))
        params.reorder_period = static_cast<int>(as_integer(*v, "params.reorder_period"));
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("config: document must be a JSON object");
    reject_unknown_keys(doc,
                        {"shape", "count", "dimension", "recipe", "f_target", "rho_target",
                         "aspect_ratio", "box", "seed", "params"},
                        "the config");

    RunConfig cfg;

    const auto* shape = find(doc, "shape");
    if (!shape || !shape->is_string())
        throw ValidationError("config: shape (string) is required");
    cfg.shape = shape_from_string(shape->get<std::string>());
    cfg.dimension = cfg.shape == ShapeKind::Disk ? 2 : 3;
    if (const auto* dim = find(doc, "dimension")) {
        if (as_integer(*dim, "dimension") != cfg.dimension)
            throw ValidationError("config: dimension must be " + std::to_string(cfg.dimension) +
                                  " for shape " + to_string(cfg.shape));
    }

    const auto* count = find(doc, "count");
    if (!count) throw ValidationError("config: count (integer) is required");
    cfg.count = as_integer(*count, "count");
    if (cfg.count < 1) throw ValidationError("config: count must be >= 1");

    if (const auto* recipe = find(doc, "recipe")) {
        if (!recipe->is_string()) throw ValidationError("config: recipe must be a string");
        cfg.recipe = recipe_from_string(recipe->get<std::string>());
    }
    const bool platelet = cfg.shape == ShapeKind::Spherodisk;
    if (platelet) {
        if (cfg.recipe != RecipeKind::Hoc && cfg.recipe != RecipeKind::QuasiNematic &&
            cfg.recipe != RecipeKind::Stacked && cfg.recipe != RecipeKind::Rsa)
            throw ValidationError(
                "config: spherodisk runs need recipe hoc, quasi_nematic, stacked, or rsa");
    } else if (cfg.recipe != RecipeKind::None && cfg.recipe != RecipeKind::Equilibrium &&
               cfg.recipe != RecipeKind::Clustered) {
        throw ValidationError("config: recipe '" + to_string(cfg.recipe) +
                              "' does not apply to disks/spheres");
    }

    if (const auto* ar = find(doc, "aspect_ratio")) {
        if (!platelet)
            throw ValidationError("config: aspect_ratio applies to spherodisks only");
        cfg.aspect_ratio = as_number(*ar, "aspect_ratio");
        if (!(cfg.aspect_ratio > 1.0))
            throw ValidationError("config: aspect_ratio must exceed 1");
    } else if (platelet) {
        throw ValidationError("config: aspect_ratio is required for spherodisks");
    }

    const auto* f = find(doc, "f_target");
    const auto* rho = find(doc, "rho_target");
    if (f && rho)
        throw ValidationError("config: give exactly one of f_target and rho_target");
    if (rho && !platelet)
        throw ValidationError("config: rho_target applies to spherodisks only");
    double f_target = 0.5;
    if (platelet) {
        if (!f && !rho)
            throw ValidationError("config: spherodisk runs need f_target or rho_target");
        const double unit = spherodisk_unit_volume(cfg.aspect_ratio);
        cfg.rho_target = rho ? as_number(*rho, "rho_target")
                             : as_number(*f, "f_target") / unit;
        if (!(cfg.rho_target > 0.0))
            throw ValidationError("config: rho_target must be > 0");
        f_target = cfg.rho_target * unit;
        if (!(f_target > 0.0 && f_target < 1.0))
            throw ValidationError("config: target volume fraction must lie in (0, 1)");
    } else if (f) {
        f_target = as_number(*f, "f_target");
    }

    if (const auto* b = find(doc, "box")) {
        if (platelet)
            throw ValidationError("config: the spherodisk box is derived from rho_target");
        if (b->is_number()) {
            cfg.box_lengths.assign(static_cast<std::size_t>(cfg.dimension),
                                   as_number(*b, "box"));
        } else if (b->is_array()) {
            if (static_cast<int>(b->size()) != cfg.dimension)
                throw ValidationError("config: box array must have " +
                                      std::to_string(cfg.dimension) + " entries");
            for (const auto& e : *b) cfg.box_lengths.push_back(as_number(e, "box"));
        } else {
            throw ValidationError("config: box must be a number or an array");
        }
        for (double len : cfg.box_lengths)
            if (!(len > 0.0)) throw ValidationError("config: box lengths must be positive");
    } else if (platelet) {
        cfg.box_lengths.assign(3, rho_box_edge(cfg.count, cfg.rho_target));
    } else {
        cfg.box_lengths.assign(static_cast<std::size_t>(cfg.dimension), 1.0);
    }

    std::uint64_t seed = 1;
    if (const auto* s = find(doc, "seed")) {
        if (s->is_number_unsigned()) {
            seed = s->get<std::uint64_t>();
        } else if (s->is_number_integer()) {
            const std::int64_t raw = s->get<std::int64_t>();
            if (raw < 0) throw ValidationError("config: seed must be non-negative");
            seed = static_cast<std::uint64_t>(raw);
        } else {
            throw ValidationError("config: seed must be an integer");
        }
    }

    SrmParams params;
    if (cfg.recipe == RecipeKind::Equilibrium || cfg.recipe == RecipeKind::Clustered) {
        double measure = 1.0;
        for (double len : cfg.box_lengths) measure *= len;
        const SphericalPreset preset =
            spherical_preset(cfg.recipe, cfg.dimension, cfg.count, f_target, measure);
        params = preset.params;
        cfg.relax_rounds = preset.relax_rounds;
    }
    params.f_target = f_target;
    params.seed = seed;

    if (const auto* po = find(doc, "params")) {
        if (platelet)
            throw ValidationError(
                "config: params overrides are not available for spherodisk recipes");
        overlay_params(params, *po);
    }
    validate_params(params);
    cfg.params = params;
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

nlohmann::json resolved_config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["shape"] = to_string(cfg.shape);
    j["dimension"] = cfg.dimension;
    j["count"] = cfg.count;
    j["recipe"] = to_string(cfg.recipe);
    j["box"] = cfg.box_lengths;
    if (cfg.shape == ShapeKind::Spherodisk) {
        j["aspect_ratio"] = cfg.aspect_ratio;
        j["rho_target"] = cfg.rho_target;
    }
    j["relax_rounds"] = cfg.relax_rounds;
    j["seed"] = cfg.params.seed;
    j["params"] = {{"c_w", cfg.params.c_w},
                   {"c_m", cfg.params.c_m},
                   {"c_r", cfg.params.c_r},
                   {"n_k", cfg.params.n_k},
                   {"n_l", cfg.params.n_l},
                   {"f_target", cfg.params.f_target},
                   {"max_iterations", cfg.params.max_iterations},
                   {"reorder_period", cfg.params.reorder_period}};
    return j;
}

namespace {

template <ShapeModel S>
RunResult run_spherical(const RunConfig& cfg, const ProgressSink& progress) {
    constexpr int N = S::dim;
    std::array<double, N> lengths{};
    for (int a = 0; a < N; ++a) lengths[a] = cfg.box_lengths[static_cast<std::size_t>(a)];
    const PeriodicBox<N> box(lengths);

    // Dilute random start well below the target, grown up by the engine.
    const double f_start = std::min(0.2, 0.3 * cfg.params.f_target);
    const double unit = N == 2 ? std::numbers::pi : 4.0 / 3.0 * std::numbers::pi;
    const double r_start = std::pow(
        f_start * box.measure() / (static_cast<double>(cfg.count) * unit), 1.0 / N);

    Rng place_rng(mix_seed(cfg.params.seed, 1));
    Snapshot<S> start;
    start.box = box;
    start.particles = rsa_place<N>(static_cast<std::size_t>(cfg.count), r_start, box,
                                   kRsaDefaultAttempts, place_rng);
    start.refresh_volume_fraction();

    auto res = srm_generate<S>(start, cfg.params, progress);
    if (cfg.relax_rounds > 0 && res.status == GenerateStatus::Converged) {
        Rng relax_rng(mix_seed(cfg.params.seed, 3));
        relax_sweeps<S>(res.snapshot.particles, box, cfg.params.c_m, cfg.params.c_r,
                        cfg.params.n_l, cfg.relax_rounds, relax_rng);
        res.snapshot.refresh_volume_fraction();
    }

    RunResult out;
    out.status = res.status;
    out.snapshot = std::move(res.snapshot);
    return out;
}

}  // namespace

RunResult execute_run(const RunConfig& cfg_in, const ProgressSink& progress,
                      std::uint64_t seed_override) {
    RunConfig cfg = cfg_in;
    if (seed_override != 0) cfg.params.seed = seed_override;
    switch (cfg.shape) {
        case ShapeKind::Disk: return run_spherical<DiskShape>(cfg, progress);
        case ShapeKind::Sphere: return run_spherical<BallShape>(cfg, progress);
        case ShapeKind::Spherodisk: {
            RunResult out;
            out.snapshot = generate_platelet_recipe(cfg.recipe, cfg.count, cfg.aspect_ratio,
                                                    cfg.rho_target, cfg.params.seed, progress,
                                                    &out.platelet_report);
            out.status = out.platelet_report.status;
            return out;
        }
    }
    throw ValidationError("config: unknown shape");
}

}  // namespace srm
