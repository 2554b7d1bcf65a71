#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "srm/snapshot_io.hpp"

using namespace srm;
namespace fs = std::filesystem;

namespace {

std::uint64_t bits_of(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    return u;
}

DiskSnapshot sample_disks() {
    DiskSnapshot snap;
    snap.box = PeriodicBox2({1.0, 2.0});
    snap.particles = {{0, {{0.1, 1.0 / 3.0}}, 1e-300},
                      {1, {{-0.0, 1.75}}, 0.25},
                      {7, {{0.9999999999999999, 5e-324}}, 0.125}};
    snap.params.c_w = 0.02;
    snap.params.c_m = 0.015625;
    snap.params.c_r = 0.0;
    snap.params.f_target = 0.5;
    snap.params.n_k = 10;
    snap.params.n_l = 11;
    snap.params.max_iterations = 123456789012345LL;
    snap.params.reorder_period = 64;
    snap.params.seed = 0xdeadbeefcafebabeULL;
    snap.seed = 42;
    snap.iteration_count = 977;
    snap.volume_fraction = 0.3125;
    return snap;
}

SphereSnapshot sample_spheres() {
    SphereSnapshot snap;
    snap.box = PeriodicBox3::cube(3.5);
    snap.particles = {{0, {{0.3, 1.1, 2.9}}, 0.2}, {1, {{1.0 / 7.0, 2.0 / 3.0, 3.0}}, 0.3}};
    snap.seed = 9;
    snap.volume_fraction = 0.01;
    return snap;
}

PlateletSnapshot sample_platelets() {
    PlateletSnapshot snap;
    snap.box = PeriodicBox3::cube(8.0);
    const double s = 1.0 / std::sqrt(3.0);
    snap.particles = {{0, {{1.0, 2.0, 3.0}}, {{0.0, 0.0, 1.0}}, 1.0, 0.01},
                      {1, {{4.0, 5.0, 6.0}}, {{s, s, s}}, 0.5, 0.05}};
    snap.seed = 77;
    snap.volume_fraction = 0.002;
    return snap;
}

// Re-dump a text snapshot after editing its JSON header line.
template <typename EditFn>
std::string with_edited_header(const std::string& text, EditFn edit) {
    const auto eol = text.find('\n');
    auto header = nlohmann::json::parse(text.substr(0, eol));
    edit(header);
    return header.dump() + text.substr(eol);
}

}  // namespace

TEST_CASE("text round trip is byte identical") {
    const auto check_shape = [](const auto& snap) {
        const std::string text = snapshot_to_text(snap);
        const SnapshotFile file = parse_snapshot(text);
        CHECK_FALSE(file.binary);
        const auto& back = std::get<std::decay_t<decltype(snap)>>(file.data);
        CHECK(snapshot_to_text(back, file.extra) == text);
    };
    check_shape(sample_disks());
    check_shape(sample_spheres());
    check_shape(sample_platelets());
}

TEST_CASE("binary round trip is byte identical") {
    const auto check_shape = [](const auto& snap) {
        const std::string blob = snapshot_to_binary(snap);
        const SnapshotFile file = parse_snapshot(blob);
        CHECK(file.binary);
        const auto& back = std::get<std::decay_t<decltype(snap)>>(file.data);
        CHECK(snapshot_to_binary(back, file.extra) == blob);
    };
    check_shape(sample_disks());
    check_shape(sample_spheres());
    check_shape(sample_platelets());
}

TEST_CASE("text preserves exotic doubles bitwise") {
    const auto snap = sample_disks();
    const auto file = parse_snapshot(snapshot_to_text(snap));
    const auto& back = std::get<DiskSnapshot>(file.data);
    REQUIRE(back.particles.size() == snap.particles.size());
    for (std::size_t i = 0; i < snap.particles.size(); ++i) {
        CHECK(back.particles[i].id == snap.particles[i].id);
        CHECK(bits_of(back.particles[i].pos[0]) == bits_of(snap.particles[i].pos[0]));
        CHECK(bits_of(back.particles[i].pos[1]) == bits_of(snap.particles[i].pos[1]));
        CHECK(bits_of(back.particles[i].radius) == bits_of(snap.particles[i].radius));
    }
    // Signed zero survives the trip.
    CHECK(std::signbit(back.particles[1].pos[0]));
}

TEST_CASE("params survive the header round trip") {
    const auto snap = sample_disks();
    const auto file = parse_snapshot(snapshot_to_binary(snap));
    const auto& back = std::get<DiskSnapshot>(file.data);
    CHECK(back.params.c_w == snap.params.c_w);
    CHECK(back.params.c_m == snap.params.c_m);
    CHECK(back.params.c_r == snap.params.c_r);
    CHECK(back.params.f_target == snap.params.f_target);
    CHECK(back.params.n_k == snap.params.n_k);
    CHECK(back.params.n_l == snap.params.n_l);
    CHECK(back.params.max_iterations == snap.params.max_iterations);
    CHECK(back.params.reorder_period == snap.params.reorder_period);
    CHECK(back.params.seed == snap.params.seed);
    CHECK(back.seed == snap.seed);
    CHECK(back.iteration_count == snap.iteration_count);
    CHECK(back.volume_fraction == snap.volume_fraction);
}

TEST_CASE("extra header fields are kept separate and rewritten") {
    const auto snap = sample_spheres();
    nlohmann::json extra{{"note", "relaxed"}, {"run_id", 42}, {"z_last", true}};
    const std::string text = snapshot_to_text(snap, extra);
    const auto file = parse_snapshot(text);
    CHECK(file.extra == extra);
    CHECK(snapshot_to_text(std::get<SphereSnapshot>(file.data), file.extra) == text);
}

TEST_CASE("empty snapshot round trips") {
    DiskSnapshot snap;
    snap.box = PeriodicBox2::unit();
    const auto t = parse_snapshot(snapshot_to_text(snap));
    CHECK(std::get<DiskSnapshot>(t.data).particles.empty());
    const auto b = parse_snapshot(snapshot_to_binary(snap));
    CHECK(std::get<DiskSnapshot>(b.data).particles.empty());
}

TEST_CASE("file save and load") {
    const fs::path dir = fs::temp_directory_path() / "srm_io_test";
    fs::create_directories(dir);
    const auto snap = sample_platelets();

    const fs::path text_path = dir / "snap.txt";
    save_snapshot(text_path, snap, nlohmann::json{{"tag", "t"}});
    const auto loaded = load_snapshot(text_path);
    CHECK_FALSE(loaded.binary);
    CHECK(loaded.extra.at("tag") == "t");
    CHECK(snapshot_to_text(std::get<PlateletSnapshot>(loaded.data), loaded.extra) ==
          snapshot_to_text(snap, nlohmann::json{{"tag", "t"}}));

    const fs::path bin_path = dir / "snap.bin";
    save_snapshot(bin_path, snap, {}, true);
    const auto bin_loaded = load_snapshot(bin_path);
    CHECK(bin_loaded.binary);

    // The SnapshotFile overload writes back whatever encoding was read.
    const fs::path copy_path = dir / "copy.bin";
    save_snapshot(copy_path, bin_loaded);
    const auto copied = load_snapshot(copy_path);
    CHECK(copied.binary);
    CHECK(snapshot_to_binary(std::get<PlateletSnapshot>(copied.data), copied.extra) ==
          snapshot_to_binary(snap));

    CHECK_THROWS_AS(load_snapshot(dir / "missing.txt"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("malformed text inputs are rejected") {
    const std::string good = snapshot_to_text(sample_disks());

    CHECK_THROWS_AS(parse_snapshot("no newline at all"), IoError);
    CHECK_THROWS_AS(parse_snapshot("not json\nid,x,y,r\n"), IoError);

    // Wrong column line for the declared shape.
    std::string bad_cols = good;
    const auto pos = bad_cols.find("id,x,y,r");
    REQUIRE(pos != std::string::npos);
    bad_cols.replace(pos, 8, "id,x,y,q");
    CHECK_THROWS_AS(parse_snapshot(bad_cols), IoError);

    // Extra row beyond the declared count.
    CHECK_THROWS_AS(parse_snapshot(good + "9,0.5,0.5,0.1\n"), IoError);

    // Truncated row.
    CHECK_THROWS_AS(parse_snapshot(good.substr(0, good.size() - 4)), IoError);

    CHECK_THROWS_AS(
        parse_snapshot(with_edited_header(good, [](nlohmann::json& h) { h["version"] = 99; })),
        IoError);
    CHECK_THROWS_AS(
        parse_snapshot(with_edited_header(good, [](nlohmann::json& h) { h["format"] = "csv"; })),
        IoError);
    CHECK_THROWS_AS(
        parse_snapshot(with_edited_header(good, [](nlohmann::json& h) { h.erase("params"); })),
        IoError);
    CHECK_THROWS_AS(
        parse_snapshot(with_edited_header(good, [](nlohmann::json& h) { h["shape"] = "hexagon"; })),
        IoError);
    CHECK_THROWS_AS(parse_snapshot(with_edited_header(
                        good, [](nlohmann::json& h) { h["box"] = {1.0, 2.0, 3.0}; })),
                    IoError);
}

TEST_CASE("malformed binary inputs are rejected") {
    const std::string good = snapshot_to_binary(sample_spheres());

    // Chopping rows breaks the payload size check; chopping into the
    // header breaks the header length check.
    CHECK_THROWS_AS(parse_snapshot(good.substr(0, good.size() - 5)), IoError);
    CHECK_THROWS_AS(parse_snapshot(good.substr(0, 30)), IoError);
    CHECK_THROWS_AS(parse_snapshot(good.substr(0, 10)), IoError);

    std::string bad_ver = good;
    bad_ver[8] = 2;  // version word follows the 8-byte magic
    CHECK_THROWS_AS(parse_snapshot(bad_ver), IoError);
}
