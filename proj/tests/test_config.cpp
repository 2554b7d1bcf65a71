#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "srm/config.hpp"
#include "srm/snapshot_io.hpp"
#include "support/oracles.hpp"

using namespace srm;
using nlohmann::json;

TEST_CASE("shape and recipe names round trip") {
    for (const char* s : {"disk", "sphere", "spherodisk"})
        CHECK(to_string(shape_from_string(s)) == s);
    for (const char* r : {"none", "equilibrium", "clustered", "hoc", "quasi_nematic", "stacked",
                          "rsa"})
        CHECK(to_string(recipe_from_string(r)) == r);
    CHECK_THROWS_AS(shape_from_string("cube"), ValidationError);
    CHECK_THROWS_AS(recipe_from_string("swirly"), ValidationError);
}

TEST_CASE("minimal disk config gets defaults") {
    const auto cfg = parse_run_config(json{{"shape", "disk"}, {"count", 100}});
    CHECK(cfg.shape == ShapeKind::Disk);
    CHECK(cfg.dimension == 2);
    CHECK(cfg.count == 100);
    CHECK(cfg.recipe == RecipeKind::None);
    CHECK(cfg.box_lengths == std::vector<double>{1.0, 1.0});
    CHECK(cfg.params.f_target == 0.5);
    CHECK(cfg.params.seed == 1);
    CHECK(cfg.relax_rounds == 0);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 10}, {"shpae", 1}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"},
                                          {"count", 10},
                                          {"params", json{{"c_q", 0.1}}}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json::array({1, 2})), ValidationError);
}

TEST_CASE("shape and dimension consistency") {
    CHECK(parse_run_config(json{{"shape", "sphere"}, {"count", 5}, {"dimension", 3}}).dimension ==
          3);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "sphere"}, {"count", 5}, {"dimension", 2}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"dimension", 3}}),
                    ValidationError);
}

TEST_CASE("count is required and positive") {
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}}), ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 0}}), ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 2.5}}), ValidationError);
}

TEST_CASE("recipe compatibility with shape") {
    CHECK_THROWS_AS(
        parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"recipe", "hoc"}}),
        ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "spherodisk"},
                                          {"count", 5},
                                          {"aspect_ratio", 10.0},
                                          {"rho_target", 1.0},
                                          {"recipe", "equilibrium"}}),
                    ValidationError);
    // Spherodisks cannot run without a recipe.
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "spherodisk"},
                                          {"count", 5},
                                          {"aspect_ratio", 10.0},
                                          {"rho_target", 1.0}}),
                    ValidationError);
}

TEST_CASE("aspect ratio rules") {
    CHECK_THROWS_AS(
        parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"aspect_ratio", 10.0}}),
        ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "spherodisk"},
                                          {"count", 5},
                                          {"recipe", "rsa"},
                                          {"rho_target", 1.0}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "spherodisk"},
                                          {"count", 5},
                                          {"recipe", "rsa"},
                                          {"aspect_ratio", 1.0},
                                          {"rho_target", 1.0}}),
                    ValidationError);
}

TEST_CASE("target fraction and density rules") {
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"},
                                          {"count", 5},
                                          {"f_target", 0.3},
                                          {"rho_target", 1.0}}),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"rho_target", 1.0}}),
        ValidationError);
    CHECK(parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"f_target", 0.3}})
              .params.f_target == 0.3);

    // Platelets accept either form; f converts through the unit volume.
    const json base{{"shape", "spherodisk"}, {"count", 100}, {"recipe", "rsa"},
                    {"aspect_ratio", 20.0}};
    json by_rho = base;
    by_rho["rho_target"] = 2.0;
    const auto cfg_rho = parse_run_config(by_rho);
    CHECK(cfg_rho.rho_target == 2.0);
    CHECK(cfg_rho.params.f_target ==
          doctest::Approx(2.0 * spherodisk_unit_volume(20.0)).epsilon(1e-12));

    json by_f = base;
    by_f["f_target"] = 0.05;
    const auto cfg_f = parse_run_config(by_f);
    CHECK(cfg_f.rho_target == doctest::Approx(0.05 / spherodisk_unit_volume(20.0)).epsilon(1e-12));
    CHECK(cfg_f.params.f_target == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("box resolution") {
    const auto square = parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"box", 2.5}});
    CHECK(square.box_lengths == std::vector<double>{2.5, 2.5});

    const auto rect =
        parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"box", json::array({2.0, 3.0})}});
    CHECK(rect.box_lengths == std::vector<double>{2.0, 3.0});

    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"},
                                          {"count", 5},
                                          {"box", json::array({1.0, 2.0, 3.0})}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"box", -1.0}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"box", "big"}}),
                    ValidationError);

    // Platelet boxes are always derived from the density.
    const auto plate = parse_run_config(json{{"shape", "spherodisk"},
                                             {"count", 20000},
                                             {"recipe", "rsa"},
                                             {"aspect_ratio", 100.0},
                                             {"rho_target", 5.0}});
    const double L = rho_box_edge(20000, 5.0);
    CHECK(plate.box_lengths == std::vector<double>{L, L, L});
    CHECK(L == doctest::Approx(std::cbrt(4000.0)));

    json with_box{{"shape", "spherodisk"}, {"count", 20000}, {"recipe", "rsa"},
                  {"aspect_ratio", 100.0}, {"rho_target", 5.0}, {"box", 10.0}};
    CHECK_THROWS_AS(parse_run_config(with_box), ValidationError);
}

TEST_CASE("presets land in the parsed params") {
    const auto eq = parse_run_config(json{{"shape", "disk"},
                                          {"count", 100},
                                          {"recipe", "equilibrium"},
                                          {"f_target", 0.3},
                                          {"box", 2.0}});
    const double r_target = std::sqrt(0.3 * 4.0 / (100.0 * std::numbers::pi));
    CHECK(eq.params.c_w == 0.02);
    CHECK(eq.params.c_m == doctest::Approx(r_target).epsilon(1e-12));
    CHECK(eq.relax_rounds == 200);

    const auto cl = parse_run_config(
        json{{"shape", "sphere"}, {"count", 50}, {"recipe", "clustered"}, {"f_target", 0.4}});
    CHECK(cl.params.c_w == 0.08);
    CHECK(cl.relax_rounds == 0);
}

TEST_CASE("params overlay applies after presets and is validated") {
    const auto cfg = parse_run_config(json{{"shape", "disk"},
                                           {"count", 10},
                                           {"recipe", "equilibrium"},
                                           {"params", json{{"c_w", 0.05}, {"n_k", 4}}}});
    CHECK(cfg.params.c_w == 0.05);
    CHECK(cfg.params.n_k == 4);
    CHECK(cfg.params.n_l == 10);  // preset value kept where not overridden

    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"},
                                          {"count", 10},
                                          {"params", json{{"c_w", 0.3}}}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "spherodisk"},
                                          {"count", 10},
                                          {"recipe", "rsa"},
                                          {"aspect_ratio", 10.0},
                                          {"rho_target", 0.5},
                                          {"params", json{{"c_w", 0.05}}}}),
                    ValidationError);
}

TEST_CASE("seed parsing") {
    CHECK(parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"seed", 7}}).params.seed == 7);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"seed", -3}}),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json{{"shape", "disk"}, {"count", 5}, {"seed", 1.5}}),
                    ValidationError);
}

TEST_CASE("resolved config echo") {
    const auto cfg = parse_run_config(json{{"shape", "disk"},
                                           {"count", 12},
                                           {"recipe", "clustered"},
                                           {"f_target", 0.2},
                                           {"seed", 11}});
    const json echo = resolved_config_json(cfg);
    CHECK(echo.at("shape") == "disk");
    CHECK(echo.at("dimension") == 2);
    CHECK(echo.at("count") == 12);
    CHECK(echo.at("recipe") == "clustered");
    CHECK(echo.at("seed") == 11);
    CHECK(echo.at("params").at("f_target") == 0.2);
    CHECK_FALSE(echo.contains("aspect_ratio"));
}

TEST_CASE("config file loading") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "srm_config_test";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "run.json");
        out << R"({"shape": "disk", "count": 25, "f_target": 0.2})";
    }
    const auto cfg = load_run_config((dir / "run.json").string());
    CHECK(cfg.count == 25);
    {
        std::ofstream out(dir / "broken.json");
        out << "{not json";
    }
    CHECK_THROWS_AS(load_run_config((dir / "broken.json").string()), IoError);
    CHECK_THROWS_AS(load_run_config((dir / "absent.json").string()), IoError);
    fs::remove_all(dir);
}

TEST_CASE("execute_run produces a valid deterministic disk packing") {
    const auto cfg = parse_run_config(
        json{{"shape", "disk"}, {"count", 20}, {"f_target", 0.3}, {"seed", 5}});
    const auto res = execute_run(cfg);
    CHECK(res.status == GenerateStatus::Converged);
    const auto& snap = std::get<DiskSnapshot>(res.snapshot);
    CHECK(snap.particles.size() == 20);
    CHECK(snap.volume_fraction == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(oracle::sphere_overlap_violations(snap.particles, snap.box, 1e-12) == 0);

    const auto again = execute_run(cfg);
    CHECK(snapshot_to_text(std::get<DiskSnapshot>(again.snapshot)) == snapshot_to_text(snap));

    // A seed override reroutes the whole run.
    const auto other = execute_run(cfg, {}, 6);
    const auto& snap6 = std::get<DiskSnapshot>(other.snapshot);
    CHECK(snap6.seed == 6);
    CHECK(snapshot_to_text(snap6) != snapshot_to_text(snap));
}

TEST_CASE("execute_run covers spheres and platelet rsa") {
    const auto sphere_cfg = parse_run_config(
        json{{"shape", "sphere"}, {"count", 15}, {"f_target", 0.2}, {"seed", 2}});
    const auto sphere_res = execute_run(sphere_cfg);
    const auto& ss = std::get<SphereSnapshot>(sphere_res.snapshot);
    CHECK(ss.particles.size() == 15);
    CHECK(oracle::sphere_overlap_violations(ss.particles, ss.box, 1e-12) == 0);

    const auto plate_cfg = parse_run_config(json{{"shape", "spherodisk"},
                                                 {"count", 30},
                                                 {"recipe", "rsa"},
                                                 {"aspect_ratio", 5.0},
                                                 {"rho_target", 0.2},
                                                 {"seed", 3}});
    const auto plate_res = execute_run(plate_cfg);
    const auto& ps = std::get<PlateletSnapshot>(plate_res.snapshot);
    CHECK(ps.particles.size() == 30);
    CHECK(ps.particles[0].diameter == 1.0);
    CHECK(ps.particles[0].thickness == doctest::Approx(0.2));
    CHECK(oracle::platelet_overlap_violations(ps.particles, ps.box, 1e-12) == 0);
    CHECK(plate_res.status == GenerateStatus::Converged);
}
