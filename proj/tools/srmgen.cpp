// srmgen: generate periodic particle RVEs, analyze their statistics, and
// solve soft-shell percolation distances from the command line.
//
// Exit codes: 0 success, 2 bad usage or config, 3 growth hit the iteration
// budget, 4 nothing percolates within delta-max, 5 file errors.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "srm/config.hpp"
#include "srm/descriptors.hpp"
#include "srm/percolation.hpp"
#include "srm/rsa.hpp"
#include "srm/snapshot_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIterationLimit = 3;
constexpr int kExitNotPercolating = 4;
constexpr int kExitIo = 5;

void append_csv_double(std::string& s, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string config_path;
    std::string out_path = "rve.txt";
    std::uint64_t seed_override = 0;
    int ensemble = 1;
    int threads = 1;
    bool binary = false;
    bool progress = false;
    bool print_config = false;
    bool dry_run = false;
};

srm::ProgressSink make_progress_sink(bool enabled) {
    if (!enabled) return {};
    return [](const srm::ProgressRecord& rec) {
        std::cerr << "iter " << rec.iteration << "  f " << rec.volume_fraction << "  "
                  << (rec.accepted ? "grew" : "shook") << "  " << rec.elapsed_seconds << "s\n";
    };
}

void write_result(const std::filesystem::path& path, const srm::RunResult& res,
                  const nlohmann::json& extra, bool binary) {
    std::visit([&](const auto& snap) { srm::save_snapshot(path, snap, extra, binary); },
               res.snapshot);
}

std::size_t result_count(const srm::RunResult& res) {
    return std::visit([](const auto& snap) { return snap.particles.size(); }, res.snapshot);
}

double result_fraction(const srm::RunResult& res) {
    return std::visit([](const auto& snap) { return snap.volume_fraction; }, res.snapshot);
}

// Derived ensemble seeds: deterministic, pairwise distinct by construction.
std::vector<std::uint64_t> ensemble_seeds(std::uint64_t base, int k) {
    std::vector<std::uint64_t> seeds;
    std::set<std::uint64_t> used;
    for (int i = 0; i < k; ++i) {
        std::uint64_t s = srm::mix_seed(base, 10000 + static_cast<std::uint64_t>(i));
        while (s == 0 || !used.insert(s).second) s = srm::mix_seed(s, 0x5eed);
        seeds.push_back(s);
    }
    return seeds;
}

std::filesystem::path ensemble_path(const std::filesystem::path& base, int index) {
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_%03d", index);
    std::filesystem::path p = base;
    p.replace_filename(base.stem().string() + suffix + base.extension().string());
    return p;
}

int cmd_generate(const GenerateArgs& args) {
    const srm::RunConfig cfg = srm::load_run_config(args.config_path);
    if (args.print_config) std::cout << srm::resolved_config_json(cfg).dump(2) << "\n";
    if (args.dry_run) return kExitOk;
    const nlohmann::json extra{{"config", srm::resolved_config_json(cfg)}};

    if (args.ensemble <= 1) {
        const srm::RunResult res =
            srm::execute_run(cfg, make_progress_sink(args.progress), args.seed_override);
        write_result(args.out_path, res, extra, args.binary);
        std::cout << "wrote " << args.out_path << ": n " << result_count(res) << ", f "
                  << result_fraction(res) << "\n";
        return res.status == srm::GenerateStatus::Converged ? kExitOk : kExitIterationLimit;
    }

    const std::uint64_t base = args.seed_override ? args.seed_override : cfg.params.seed;
    const auto seeds = ensemble_seeds(base, args.ensemble);
    std::vector<int> codes(seeds.size(), kExitOk);
    std::vector<std::string> errors(seeds.size());
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= seeds.size()) return;
            try {
                const srm::RunResult res = srm::execute_run(cfg, {}, seeds[k]);
                write_result(ensemble_path(args.out_path, static_cast<int>(k)), res, extra,
                             args.binary);
                if (res.status != srm::GenerateStatus::Converged) codes[k] = kExitIterationLimit;
            } catch (const srm::IoError& e) {
                codes[k] = kExitIo;
                errors[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::max(1, std::min<int>(args.threads, args.ensemble));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int exit_code = kExitOk;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        if (!errors[k].empty()) std::cerr << "member " << k << ": " << errors[k] << "\n";
        exit_code = std::max(exit_code, codes[k]);
    }
    std::cout << "wrote " << seeds.size() << " ensemble members to "
              << ensemble_path(args.out_path, 0).string() << " .. "
              << ensemble_path(args.out_path, static_cast<int>(seeds.size()) - 1).string()
              << "\n";
    return exit_code;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
    std::string snapshot_path;
    std::string csv_path;
    std::int64_t lvf_samples = 0;
    std::uint64_t lvf_seed = 1;
    bool alignment = false;
    double alignment_cutoff = 0.0;  // 0: 1.5x the largest diameter
    int nnd_bins = 0;
    bool audit = false;
    double audit_tol = 1e-12;
};

template <int N>
std::size_t brute_sphere_violations(const std::vector<srm::Particle<N>>& ps,
                                    const srm::PeriodicBox<N>& box, double rel_tol) {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const double rr = (ps[i].radius + ps[j].radius) * (1.0 - rel_tol);
            if (box.min_image_dist2(ps[i].pos, ps[j].pos) < rr * rr) ++bad;
        }
    return bad;
}

std::size_t brute_platelet_violations(const std::vector<srm::Spherodisk>& ps,
                                      const srm::PeriodicBox3& box, double rel_tol) {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const srm::Vec3 d = box.min_image(ps[j].pos, ps[i].pos);
            const double dist =
                srm::disk_disk_distance(srm::Vec3{}, ps[i].normal, srm::medial_radius(ps[i]), d,
                                        ps[j].normal, srm::medial_radius(ps[j]));
            if (dist < 0.5 * (ps[i].thickness + ps[j].thickness) * (1.0 - rel_tol)) ++bad;
        }
    return bad;
}

nlohmann::json column_summary(std::span<const double> values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values)
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    nlohmann::json j{{"mean", srm::finite_mean(values)},
                     {"stddev", srm::finite_stddev(values)}};
    if (lo <= hi) {
        j["min"] = lo;
        j["max"] = hi;
    }
    return j;
}

template <typename SnapT>
int analyze_snapshot(const SnapT& snap, const AnalyzeArgs& args) {
    constexpr bool kPlatelet = std::is_same_v<SnapT, srm::PlateletSnapshot>;
    const std::size_t n = snap.particles.size();
    if (n < 2) throw srm::ValidationError("analyze: need at least 2 particles");
    if (args.alignment && !kPlatelet)
        throw srm::ValidationError("analyze: --alignment applies to spherodisk snapshots only");

    nlohmann::json summary;
    summary["count"] = n;
    summary["volume_fraction"] = snap.volume_fraction;

    int exit_code = kExitOk;
    if (args.audit) {
        std::size_t bad = 0;
        if constexpr (kPlatelet)
            bad = brute_platelet_violations(snap.particles, snap.box, args.audit_tol);
        else
            bad = brute_sphere_violations(snap.particles, snap.box, args.audit_tol);
        summary["audit_violations"] = bad;
        if (bad > 0) exit_code = 1;
    }

    const std::vector<double> nnd = srm::nearest_neighbor_distances(snap);
    summary["nnd"] = column_summary(nnd);
    if (args.nnd_bins > 0) {
        double hi = 0.0;
        for (double v : nnd) hi = std::max(hi, v);
        const auto h = srm::histogram(nnd, args.nnd_bins, 0.0, hi);
        summary["nnd_histogram"] = {{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}};
    }

    srm::LocalVolumeFractions lvf;
    if (args.lvf_samples > 0) {
        srm::Rng rng(args.lvf_seed);
        lvf = srm::local_volume_fractions(snap, args.lvf_samples, rng);
        auto j = column_summary(lvf.value);
        j["samples"] = lvf.sample_count;
        j["reliable"] =
            std::count(lvf.reliable.begin(), lvf.reliable.end(), std::uint8_t{1});
        summary["lvf"] = std::move(j);
    }

    srm::NematicOrder order;
    if constexpr (kPlatelet) {
        if (args.alignment) {
            const double cutoff = args.alignment_cutoff > 0.0
                                      ? args.alignment_cutoff
                                      : srm::default_alignment_cutoff(snap);
            order = srm::local_nematic_order(snap, cutoff);
            auto j = column_summary(order.value);
            j["cutoff"] = cutoff;
            summary["alignment"] = std::move(j);
        }
    }

    if (!args.csv_path.empty()) {
        std::string csv = "id,nnd";
        if (args.lvf_samples > 0) csv += ",lvf,lvf_hits,lvf_reliable";
        if (args.alignment) csv += ",alignment,alignment_neighbors";
        csv += '\n';
        for (std::size_t i = 0; i < n; ++i) {
            csv += std::to_string(snap.particles[i].id);
            csv += ',';
            append_csv_double(csv, nnd[i]);
            if (args.lvf_samples > 0) {
                csv += ',';
                append_csv_double(csv, lvf.value[i]);
                csv += ',';
                csv += std::to_string(lvf.hits[i]);
                csv += ',';
                csv += lvf.reliable[i] ? '1' : '0';
            }
            if (args.alignment) {
                csv += ',';
                append_csv_double(csv, order.value[i]);
                csv += ',';
                csv += std::to_string(order.neighbor_count[i]);
            }
            csv += '\n';
        }
        srm::write_file_atomic(args.csv_path, csv);
    }

    std::cout << summary.dump(2) << "\n";
    return exit_code;
}

int cmd_analyze(const AnalyzeArgs& args) {
    const srm::SnapshotFile file = srm::load_snapshot(args.snapshot_path);
    return std::visit([&](const auto& snap) { return analyze_snapshot(snap, args); }, file.data);
}

// ---------------------------------------------------------------------------
// percolate

struct PercolateArgs {
    std::vector<std::string> snapshot_paths;
    double delta_max = 0.0;
    std::string csv_path;
};

int cmd_percolate(const PercolateArgs& args) {
    std::string csv =
        "snapshot,count,shape,delta_max,percolates,delta_c,delta_c_over_d,axis_mask,wx,wy,wz\n";
    bool all_percolate = true;

    for (const std::string& path : args.snapshot_paths) {
        const srm::SnapshotFile file = srm::load_snapshot(path);
        std::optional<srm::CriticalDistance> crit;
        double diameter = 0.0;
        std::size_t count = 0;
        const char* shape = nullptr;

        if (const auto* snap = std::get_if<srm::SphereSnapshot>(&file.data)) {
            crit = srm::critical_percolation_distance(*snap, args.delta_max);
            for (const auto& p : snap->particles) diameter = std::max(diameter, 2.0 * p.radius);
            count = snap->particles.size();
            shape = "sphere";
        } else if (const auto* plates = std::get_if<srm::PlateletSnapshot>(&file.data)) {
            crit = srm::critical_percolation_distance(*plates, args.delta_max);
            for (const auto& p : plates->particles) diameter = std::max(diameter, p.diameter);
            count = plates->particles.size();
            shape = "spherodisk";
        } else {
            throw srm::ValidationError("percolate: '" + path + "' is a 2D snapshot");
        }

        csv += path;
        csv += ',';
        csv += std::to_string(count);
        csv += ',';
        csv += shape;
        csv += ',';
        append_csv_double(csv, args.delta_max);
        if (crit) {
            csv += ",1,";
            append_csv_double(csv, crit->delta_c);
            csv += ',';
            append_csv_double(csv, diameter > 0.0 ? crit->delta_c / diameter : 0.0);
            csv += ',';
            csv += std::to_string(crit->axis_mask);
            for (int a = 0; a < 3; ++a) {
                csv += ',';
                csv += std::to_string(crit->winding[a]);
            }
            csv += '\n';
            std::cout << path << ": delta_c " << crit->delta_c << " (delta_c/D "
                      << (diameter > 0.0 ? crit->delta_c / diameter : 0.0) << ", axis mask "
                      << crit->axis_mask << ")\n";
        } else {
            csv += ",0,,,,,,\n";
            std::cout << path << ": no percolation within delta_max " << args.delta_max << "\n";
            all_percolate = false;
        }
    }

    if (!args.csv_path.empty()) srm::write_file_atomic(args.csv_path, csv);
    return all_percolate ? kExitOk : kExitNotPercolating;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    int dimension = 2;
    std::vector<std::int64_t> sizes;
    double f0 = 0.1;
    double f_target = 0.5;
    std::uint64_t seed = 1;
    bool no_reorder = false;
    std::string csv_path;
};

template <int N>
std::pair<double, srm::GenerateResult<srm::SphereShape<N>>> timed_growth(std::int64_t n,
                                                                         const BenchArgs& args) {
    using Shape = srm::SphereShape<N>;
    const auto box = srm::PeriodicBox<N>::unit();
    const double unit = N == 2 ? std::numbers::pi : 4.0 / 3.0 * std::numbers::pi;
    const double nn = static_cast<double>(n);
    const double r0 = std::pow(args.f0 / (nn * unit), 1.0 / N);
    const double r_target = std::pow(args.f_target / (nn * unit), 1.0 / N);

    srm::Rng rng(srm::mix_seed(args.seed, static_cast<std::uint64_t>(n)));
    srm::Snapshot<Shape> start;
    start.box = box;
    start.particles =
        srm::rsa_place<N>(static_cast<std::size_t>(n), r0, box, srm::kRsaDefaultAttempts, rng);
    start.refresh_volume_fraction();

    srm::SrmParams params;
    params.c_w = 0.02;
    params.c_m = r_target;
    params.n_k = 10;
    params.n_l = 10;
    params.f_target = args.f_target;
    params.seed = srm::mix_seed(args.seed, static_cast<std::uint64_t>(n) + 1);
    params.reorder_period = args.no_reorder ? 0 : 1;

    const auto t0 = std::chrono::steady_clock::now();
    auto res = srm::srm_generate<Shape>(start, params);
    const auto t1 = std::chrono::steady_clock::now();
    return {std::chrono::duration<double>(t1 - t0).count(), std::move(res)};
}

int cmd_bench(const BenchArgs& args) {
    std::string csv = "n,seconds,iterations,f\n";
    std::vector<double> log_n, log_t;
    int exit_code = kExitOk;

    for (std::int64_t n : args.sizes) {
        double seconds = 0.0;
        std::int64_t iterations = 0;
        double f = 0.0;
        srm::GenerateStatus status = srm::GenerateStatus::Converged;
        if (args.dimension == 2) {
            auto [secs, res] = timed_growth<2>(n, args);
            seconds = secs;
            iterations = res.snapshot.iteration_count;
            f = res.snapshot.volume_fraction;
            status = res.status;
        } else {
            auto [secs, res] = timed_growth<3>(n, args);
            seconds = secs;
            iterations = res.snapshot.iteration_count;
            f = res.snapshot.volume_fraction;
            status = res.status;
        }
        if (status != srm::GenerateStatus::Converged) exit_code = kExitIterationLimit;

        csv += std::to_string(n);
        csv += ',';
        append_csv_double(csv, seconds);
        csv += ',';
        csv += std::to_string(iterations);
        csv += ',';
        append_csv_double(csv, f);
        csv += '\n';
        std::cout << "n " << n << ": " << seconds << "s, " << iterations << " iterations, f "
                  << f << "\n";
        log_n.push_back(std::log(static_cast<double>(n)));
        log_t.push_back(std::log(std::max(seconds, 1e-9)));
    }

    if (log_n.size() >= 2) {
        // Least-squares slope of log time against log size.
        const double k = static_cast<double>(log_n.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            sx += log_n[i];
            sy += log_t[i];
            sxx += log_n[i] * log_n[i];
            sxy += log_n[i] * log_t[i];
        }
        const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        std::cout << "slope " << slope << "\n";
    }

    if (!args.csv_path.empty()) srm::write_file_atomic(args.csv_path, csv);
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic RVE generation, statistics, and percolation"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Grow an RVE from a JSON config");
    generate->add_option("--config", gen.config_path, "Run configuration file")->required();
    generate->add_option("--out", gen.out_path, "Output snapshot path");
    generate->add_option("--seed", gen.seed_override, "Override the config seed (nonzero)");
    generate->add_option("--ensemble", gen.ensemble, "Number of independent members")
        ->check(CLI::PositiveNumber);
    generate->add_option("--threads", gen.threads, "Worker threads for ensembles")
        ->check(CLI::PositiveNumber);
    generate->add_flag("--binary", gen.binary, "Write the binary snapshot encoding");
    generate->add_flag("--progress", gen.progress, "Report each growth iteration on stderr");
    generate->add_flag("--print-config", gen.print_config, "Echo the resolved configuration");
    generate->add_flag("--dry-run", gen.dry_run, "Validate and resolve the config, then stop");

    AnalyzeArgs ana;
    CLI::App* analyze = app.add_subcommand("analyze", "Per-particle statistics of a snapshot");
    analyze->add_option("snapshot", ana.snapshot_path, "Snapshot file")->required();
    analyze->add_option("--out", ana.csv_path, "Write a per-particle CSV here");
    analyze->add_option("--lvf-samples", ana.lvf_samples,
                        "Monte Carlo samples for local volume fractions")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--lvf-seed", ana.lvf_seed, "RNG seed for the sampling");
    analyze->add_flag("--alignment", ana.alignment, "Local nematic order (spherodisks)");
    analyze->add_option("--alignment-cutoff", ana.alignment_cutoff,
                        "Neighbor cutoff; default 1.5x the largest diameter")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--nnd-bins", ana.nnd_bins, "Histogram the nearest-neighbor distances")
        ->check(CLI::PositiveNumber);
    analyze->add_flag("--audit", ana.audit, "All-pairs overlap audit (exit 1 on violations)");
    analyze->add_option("--audit-tol", ana.audit_tol, "Relative contact tolerance for the audit");

    PercolateArgs perc;
    CLI::App* percolate =
        app.add_subcommand("percolate", "Critical soft-shell distance of 3D snapshots");
    percolate->add_option("snapshots", perc.snapshot_paths, "Snapshot files")->required();
    percolate->add_option("--delta-max", perc.delta_max, "Largest shell distance to consider")
        ->required()
        ->check(CLI::PositiveNumber);
    percolate->add_option("--csv", perc.csv_path, "Write one CSV row per snapshot");

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Time the growth engine across sizes");
    bench_cmd->add_option("--dimension", bench.dimension, "2 or 3")
        ->check(CLI::IsMember({2, 3}));
    bench_cmd->add_option("--sizes", bench.sizes, "Particle counts to time")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--f0", bench.f0, "Starting volume fraction")
        ->check(CLI::Range(1e-6, 0.9));
    bench_cmd->add_option("--f-target", bench.f_target, "Target volume fraction")
        ->check(CLI::Range(1e-6, 0.9));
    bench_cmd->add_option("--seed", bench.seed, "Base RNG seed");
    bench_cmd->add_flag("--no-reorder", bench.no_reorder, "Disable locality reordering");
    bench_cmd->add_option("--csv", bench.csv_path, "Write timings as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (analyze->parsed()) return cmd_analyze(ana);
        if (percolate->parsed()) return cmd_percolate(perc);
        if (bench_cmd->parsed()) return cmd_bench(bench);
    } catch (const srm::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const srm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
