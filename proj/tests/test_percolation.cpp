#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "srm/percolation.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace srm;

namespace {

// Periodic x-chain: k spheres of radius R at spacing s, k*s = L.
SphereSnapshot chain(int k, double s, double R) {
    SphereSnapshot snap;
    snap.box = PeriodicBox3::cube(k * s);
    for (int i = 0; i < k; ++i)
        snap.particles.push_back({i, {{i * s, 0.0, 0.0}}, R});
    snap.refresh_volume_fraction();
    return snap;
}

}  // namespace

TEST_CASE("number density") {
    const auto unit = PeriodicBox3::unit();
    CHECK(number_density(1, 1.0, unit) == doctest::Approx(1.0));

    const double L = std::cbrt(20000.0 / 5.0);
    const auto box = PeriodicBox3::cube(L);
    CHECK(number_density(20000, 1.0, box) == doctest::Approx(5.0));

    const PeriodicBox3 slab({1.0, 1.0, 2.0});
    CHECK_THROWS_AS(number_density(10, 1.0, slab), NonCubicBox);
}

TEST_CASE("displacement union find algebra") {
    DisplacementUnionFind uf(3);
    auto o1 = uf.unite(0, 1, {1, 0, 0});
    CHECK(o1.merged);
    CHECK_FALSE(o1.wrapped);
    auto o2 = uf.unite(1, 2, {0, 1, 0});
    CHECK(o2.merged);

    // Consistent closure: no wrap.
    auto o3 = uf.unite(0, 2, {1, 1, 0});
    CHECK_FALSE(o3.merged);
    CHECK_FALSE(o3.wrapped);

    // Inconsistent closure: winding = W_j - W_i - shift = (1,1,0)-(0,0,0)-(2,1,0).
    auto o4 = uf.unite(0, 2, {2, 1, 0});
    CHECK_FALSE(o4.merged);
    CHECK(o4.wrapped);
    CHECK(o4.winding == std::array<int, 3>{-1, 0, 0});
}

TEST_CASE("gap edges two sphere cases") {
    SphereSnapshot snap;
    snap.box = PeriodicBox3::unit();
    // Direct separation 0.4 (gap 0.2), wraparound image 0.6 (gap 0.4).
    snap.particles = {{0, {{0.2, 0.5, 0.5}}, 0.1}, {1, {{0.6, 0.5, 0.5}}, 0.1}};
    snap.refresh_volume_fraction();

    CHECK(gap_edges(snap, 0.15).empty());

    const auto edges = gap_edges(snap, 0.25);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].i == 0);
    CHECK(edges[0].j == 1);
    CHECK(edges[0].gap == doctest::Approx(0.2));
    CHECK(edges[0].shift == std::array<int, 3>{0, 0, 0});

    const auto both = gap_edges(snap, 0.45);
    REQUIRE(both.size() == 2);
    CHECK(both[1].gap == doctest::Approx(0.4));
    CHECK(both[1].shift == std::array<int, 3>{-1, 0, 0});
}

TEST_CASE("gap edges equal the image shift oracle") {
    Rng rng(71);
    for (int trial = 0; trial < 6; ++trial) {
        const auto box = PeriodicBox3::unit();
        auto snap = fixture::sphere_snapshot(100, 0.01, 0.04, box, 100 + trial);
        const double delta_max = 0.3;
        const auto got = gap_edges(snap, delta_max);
        const auto want = oracle::sphere_gap_edges_brute(snap.particles, snap.box, delta_max);
        REQUIRE(got.size() == want.size());
        for (std::size_t e = 0; e < got.size(); ++e) {
            CHECK(got[e].i == want[e].i);
            CHECK(got[e].j == want[e].j);
            CHECK(got[e].gap == want[e].gap);  // bit-equal arithmetic
            CHECK(got[e].shift == want[e].shift);
        }
    }
}

TEST_CASE("delta_max validation") {
    SphereSnapshot snap;
    snap.box = PeriodicBox3::unit();
    snap.particles = {{0, {{0.2, 0.5, 0.5}}, 0.1}, {1, {{0.7, 0.5, 0.5}}, 0.1}};
    CHECK_THROWS_AS(gap_edges(snap, 0.85), DeltaMaxTooLarge);  // 2*0.1 + 0.85 > 1
    CHECK_THROWS_AS(gap_edges(snap, 0.0), ValidationError);
    CHECK_NOTHROW(gap_edges(snap, 0.79));

    // A single particle has no pair enumeration: any delta is legal and
    // self-image edges alone decide spanning.
    snap.particles.resize(1);
    CHECK_NOTHROW(gap_edges(snap, 5.0));
    const auto rep = spans(snap, 0.8001);  // L - 2R = 0.8
    CHECK(rep.wraps);
    CHECK(rep.axis_mask == 7u);  // cubic box: all three axes at once
    CHECK_FALSE(spans(snap, 0.7999).wraps);
}

TEST_CASE("chain spans at the analytic threshold") {
    // Binary-exact geometry: s = 0.5, R = 0.125, so s - 2R = 0.25.
    const auto snap = chain(4, 0.5, 0.125);
    CHECK_FALSE(spans(snap, 0.2499).wraps);
    const auto rep = spans(snap, 0.25);
    CHECK(rep.wraps);
    CHECK(rep.axis_mask == 1u);  // x only

    const auto crit = critical_percolation_distance(snap, 0.5);
    REQUIRE(crit.has_value());
    CHECK(crit->delta_c == 0.25);  // exact: the gap values are exact binary
    CHECK((crit->winding[0] == 1 || crit->winding[0] == -1));
    CHECK(crit->axis_mask == 1u);
}

TEST_CASE("critical distance scale invariance") {
    const auto base = chain(5, 0.4, 0.11);
    const auto c0 = critical_percolation_distance(base, 0.3);
    REQUIRE(c0.has_value());

    const double lambda = 3.7;
    SphereSnapshot scaled;
    scaled.box = PeriodicBox3::cube(base.box.length(0) * lambda);
    for (const auto& p : base.particles)
        scaled.particles.push_back({p.id, p.pos * lambda, p.radius * lambda});
    const auto c1 = critical_percolation_distance(scaled, 0.3 * lambda);
    REQUIRE(c1.has_value());
    CHECK(c1->delta_c == doctest::Approx(c0->delta_c * lambda).epsilon(1e-12));
}

TEST_CASE("spans agrees with the tiling oracle") {
    for (int trial = 0; trial < 8; ++trial) {
        const auto box = PeriodicBox3::unit();
        auto snap = fixture::sphere_snapshot(50, 0.02, 0.06, box, 500 + trial);
        const double delta_max = 0.25;
        const auto edges = oracle::sphere_gap_edges_brute(snap.particles, snap.box, delta_max);
        for (double delta : {0.02, 0.05, 0.1, 0.15, 0.2, 0.25}) {
            const bool lib = spans(snap, delta).wraps;
            const bool oracle_spans = oracle::tiling_spans(snap.particles.size(), edges, delta);
            CHECK(lib == oracle_spans);
        }
    }
}

TEST_CASE("critical distance equals the sorted threshold oracle") {
    for (int trial = 0; trial < 10; ++trial) {
        const auto box = PeriodicBox3::unit();
        auto snap = fixture::sphere_snapshot(30 + trial, 0.02, 0.05, box, 900 + trial);
        const double delta_max = 0.3;
        const auto lib = critical_percolation_distance(snap, delta_max);
        const auto brute = oracle::critical_delta_brute(snap.particles, snap.box, delta_max);
        REQUIRE(lib.has_value() == brute.has_value());
        if (lib) CHECK(lib->delta_c == *brute);  // bit-exact
    }
}

TEST_CASE("dilute system does not percolate") {
    const auto box = PeriodicBox3::unit();
    auto snap = fixture::sphere_snapshot(5, 0.01, 0.02, box, 77);
    CHECK_FALSE(critical_percolation_distance(snap, 0.05).has_value());
    CHECK_FALSE(spans(snap, 0.05).wraps);
}

TEST_CASE("platelet edges face to face") {
    PlateletSnapshot snap;
    snap.box = PeriodicBox3::cube(10.0);
    const Vec3 ez{{0.0, 0.0, 1.0}};
    Spherodisk a, b;
    a.id = 0;
    a.pos = Vec3{{5.0, 5.0, 4.75}};
    a.normal = ez;
    a.diameter = 1.0;
    a.thickness = 0.1;
    b = a;
    b.id = 1;
    b.pos = Vec3{{5.0, 5.0, 5.25}};  // medial separation 0.5, surface gap 0.4
    snap.particles = {a, b};
    snap.refresh_volume_fraction();

    const auto edges = gap_edges(snap, 0.45);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].gap == doctest::Approx(0.4).epsilon(1e-9));

    const auto crit = critical_percolation_distance(snap, 0.45);
    CHECK_FALSE(crit.has_value());  // two plates cannot wrap a 10-box at 0.45
}
