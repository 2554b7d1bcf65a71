// Microbenchmarks for the hot paths: neighbor-grid rebuilds, collision
// checks, migration sweeps, platelet distance queries, and the percolation
// solve. Sizes are modest so a full run stays under a minute.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "srm/cell_grid.hpp"
#include "srm/engine.hpp"
#include "srm/percolation.hpp"
#include "srm/rsa.hpp"
#include "srm/snapshot_io.hpp"
#include "srm/spherodisk.hpp"

namespace {

template <int N>
std::vector<srm::Particle<N>> packed_particles(std::int64_t n, double f, std::uint64_t seed) {
    const auto box = srm::PeriodicBox<N>::unit();
    const double nn = static_cast<double>(n);
    const double r = N == 2 ? std::sqrt(f / (nn * std::numbers::pi))
                            : std::cbrt(f * 3.0 / (nn * 4.0 * std::numbers::pi));
    srm::Rng rng(seed);
    return srm::rsa_place<N>(static_cast<std::size_t>(n), r, box, srm::kRsaDefaultAttempts, rng);
}

template <int N>
void BM_GridBuild(benchmark::State& state) {
    const auto n = state.range(0);
    const auto box = srm::PeriodicBox<N>::unit();
    const auto ps = packed_particles<N>(n, 0.2, 42);
    double r = 0.0;
    for (const auto& p : ps) r = std::max(r, p.radius);
    for (auto _ : state) {
        srm::CellGrid<N> grid(box, 2.5 * r, r, 0.0);
        grid.clear(ps.size());
        for (const auto& p : ps) grid.insert(p.id, p.pos);
        benchmark::DoNotOptimize(grid);
    }
    state.SetItemsProcessed(state.iterations() * n);
}

template <int N>
void BM_CollisionCheck(benchmark::State& state) {
    using Shape = std::conditional_t<N == 2, srm::DiskShape, srm::BallShape>;
    const auto box = srm::PeriodicBox<N>::unit();
    auto ps = packed_particles<N>(2000, 0.2, 43);
    double r = 0.0;
    for (const auto& p : ps) r = std::max(r, p.radius);
    srm::CellGrid<N> grid(box, 2.5 * r, r, 0.0);
    grid.clear(ps.size());
    for (const auto& p : ps) grid.insert(p.id, p.pos);

    srm::Rng rng(7);
    srm::Particle<N> probe = ps[0];
    for (auto _ : state) {
        probe.pos = srm::random_point(rng, box);
        benchmark::DoNotOptimize(srm::shape_collides<Shape>(probe, ps, grid));
    }
}

template <int N>
void BM_MigrateSweep(benchmark::State& state) {
    using Shape = std::conditional_t<N == 2, srm::DiskShape, srm::BallShape>;
    const auto n = state.range(0);
    const auto box = srm::PeriodicBox<N>::unit();
    auto ps = packed_particles<N>(n, 0.25, 44);
    double r = 0.0;
    for (const auto& p : ps) r = std::max(r, p.radius);
    srm::Rng rng(8);
    for (auto _ : state) {
        srm::CellGrid<N> grid(box, 2.5 * r, r, 0.0);
        grid.clear(ps.size());
        for (const auto& p : ps) grid.insert(p.id, p.pos);
        benchmark::DoNotOptimize(srm::migrate<Shape>(ps, grid, 0.5 * r, 0.0, 4, rng));
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_DiskDistance(benchmark::State& state) {
    srm::Rng rng(9);
    for (auto _ : state) {
        const srm::Vec3 n1 = srm::random_unit_vector<3>(rng);
        const srm::Vec3 n2 = srm::random_unit_vector<3>(rng);
        const srm::Vec3 off = srm::random_unit_vector<3>(rng) * rng.uniform(0.0, 1.2);
        benchmark::DoNotOptimize(srm::disk_disk_distance(srm::Vec3{}, n1, 0.5, off, n2, 0.5));
    }
}

void BM_DisksWithin(benchmark::State& state) {
    srm::Rng rng(9);  // same stream as BM_DiskDistance for comparability
    for (auto _ : state) {
        const srm::Vec3 n1 = srm::random_unit_vector<3>(rng);
        const srm::Vec3 n2 = srm::random_unit_vector<3>(rng);
        const srm::Vec3 off = srm::random_unit_vector<3>(rng) * rng.uniform(0.0, 1.2);
        benchmark::DoNotOptimize(
            srm::disks_within(srm::Vec3{}, n1, 0.5, off, n2, 0.5, 0.01));
    }
}

void BM_SphereGrowth(benchmark::State& state) {
    const auto n = state.range(0);
    for (auto _ : state) {
        state.PauseTiming();
        srm::SphereSnapshot start;
        start.box = srm::PeriodicBox3::unit();
        {
            srm::Rng rng(45);
            start.particles = packed_particles<3>(n, 0.1, 45);
            start.refresh_volume_fraction();
        }
        srm::SrmParams params;
        params.c_w = 0.02;
        params.c_m = std::cbrt(0.3 * 3.0 / (n * 4.0 * std::numbers::pi));
        params.n_k = 10;
        params.n_l = 10;
        params.f_target = 0.3;
        params.seed = 46;
        state.ResumeTiming();
        benchmark::DoNotOptimize(srm::srm_generate<srm::BallShape>(start, params));
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_CriticalDistance(benchmark::State& state) {
    srm::SphereSnapshot snap;
    snap.box = srm::PeriodicBox3::unit();
    snap.particles = packed_particles<3>(2000, 0.15, 47);
    snap.refresh_volume_fraction();
    for (auto _ : state)
        benchmark::DoNotOptimize(srm::critical_percolation_distance(snap, 0.2));
}

void BM_SnapshotText(benchmark::State& state) {
    srm::SphereSnapshot snap;
    snap.box = srm::PeriodicBox3::unit();
    snap.particles = packed_particles<3>(5000, 0.1, 48);
    snap.refresh_volume_fraction();
    for (auto _ : state) benchmark::DoNotOptimize(srm::snapshot_to_text(snap));
    state.SetBytesProcessed(state.iterations() *
                            static_cast<std::int64_t>(srm::snapshot_to_text(snap).size()));
}

BENCHMARK(BM_GridBuild<2>)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GridBuild<3>)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CollisionCheck<2>);
BENCHMARK(BM_CollisionCheck<3>);
BENCHMARK(BM_MigrateSweep<2>)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MigrateSweep<3>)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DiskDistance);
BENCHMARK(BM_DisksWithin);
BENCHMARK(BM_SphereGrowth)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriticalDistance)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SnapshotText)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
