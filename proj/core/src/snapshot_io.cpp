#include "srm/snapshot_io.hpp"

#include <unistd.h>

#include <array>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "srm/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary snapshot encoding assumes a little-endian host");

namespace srm {

namespace {

constexpr char kMagic[8] = {'S', 'R', 'M', 'S', 'N', 'A', 'P', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

void append_double(std::string& s, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, res.ptr);
}

void append_int(std::string& s, long long v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, res.ptr);
}

nlohmann::json params_to_json(const SrmParams& p) {
    return nlohmann::json{{"c_m", p.c_m},
                          {"c_r", p.c_r},
                          {"c_w", p.c_w},
                          {"f_target", p.f_target},
                          {"max_iterations", p.max_iterations},
                          {"n_k", p.n_k},
                          {"n_l", p.n_l},
                          {"reorder_period", p.reorder_period},
                          {"seed", p.seed}};
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw IoError(std::string("snapshot header: missing key '") + key + "'");
    return *it;
}

SrmParams params_from_json(const nlohmann::json& j) {
    SrmParams p;
    p.c_m = require(j, "c_m").get<double>();
    p.c_r = require(j, "c_r").get<double>();
    p.c_w = require(j, "c_w").get<double>();
    p.f_target = require(j, "f_target").get<double>();
    p.max_iterations = require(j, "max_iterations").get<std::int64_t>();
    p.n_k = require(j, "n_k").get<int>();
    p.n_l = require(j, "n_l").get<int>();
    p.reorder_period = require(j, "reorder_period").get<int>();
    p.seed = require(j, "seed").get<std::uint64_t>();
    return p;
}

struct ShapeTraits {
    const char* name;
    int dimension;
    const char* columns;
    int doubles_per_row;
};

constexpr ShapeTraits kDiskTraits{"disk", 2, "id,x,y,r", 3};
constexpr ShapeTraits kSphereTraits{"sphere", 3, "id,x,y,z,r", 4};
constexpr ShapeTraits kPlateletTraits{"spherodisk", 3, "id,x,y,z,nx,ny,nz,D,t", 8};

const ShapeTraits& traits_for(const DiskSnapshot&) { return kDiskTraits; }
const ShapeTraits& traits_for(const SphereSnapshot&) { return kSphereTraits; }
const ShapeTraits& traits_for(const PlateletSnapshot&) { return kPlateletTraits; }

void row_values(const Disk& p, double* out) {
    out[0] = p.pos[0];
    out[1] = p.pos[1];
    out[2] = p.radius;
}

void row_values(const Sphere& p, double* out) {
    out[0] = p.pos[0];
    out[1] = p.pos[1];
    out[2] = p.pos[2];
    out[3] = p.radius;
}

void row_values(const Spherodisk& p, double* out) {
    out[0] = p.pos[0];
    out[1] = p.pos[1];
    out[2] = p.pos[2];
    out[3] = p.normal[0];
    out[4] = p.normal[1];
    out[5] = p.normal[2];
    out[6] = p.diameter;
    out[7] = p.thickness;
}

void from_row(Disk& p, const double* v) {
    p.pos = {{v[0], v[1]}};
    p.radius = v[2];
}

void from_row(Sphere& p, const double* v) {
    p.pos = {{v[0], v[1], v[2]}};
    p.radius = v[3];
}

void from_row(Spherodisk& p, const double* v) {
    p.pos = {{v[0], v[1], v[2]}};
    p.normal = {{v[3], v[4], v[5]}};
    p.diameter = v[6];
    p.thickness = v[7];
}

template <typename SnapT>
nlohmann::json make_header(const SnapT& snap, const nlohmann::json& extra) {
    const ShapeTraits& tr = traits_for(snap);
    nlohmann::json h = nlohmann::json::object();
    if (extra.is_object())
        for (const auto& [k, v] : extra.items()) h[k] = v;
    nlohmann::json box = nlohmann::json::array();
    for (int a = 0; a < decltype(SnapT::box)::dim(); ++a) box.push_back(snap.box.length(a));
    h["box"] = std::move(box);
    h["count"] = snap.particles.size();
    h["dimension"] = tr.dimension;
    h["format"] = "srm-snapshot";
    h["iterations"] = snap.iteration_count;
    h["params"] = params_to_json(snap.params);
    h["seed"] = snap.seed;
    h["shape"] = tr.name;
    h["version"] = kFormatVersion;
    h["volume_fraction"] = snap.volume_fraction;
    return h;
}

template <typename SnapT>
std::string to_text(const SnapT& snap, const nlohmann::json& extra) {
    const ShapeTraits& tr = traits_for(snap);
    std::string out = make_header(snap, extra).dump();
    out += '\n';
    out += tr.columns;
    out += '\n';
    out.reserve(out.size() + snap.particles.size() * 32 * (tr.doubles_per_row + 1));
    double vals[8];
    for (const auto& p : snap.particles) {
        append_int(out, p.id);
        row_values(p, vals);
        for (int c = 0; c < tr.doubles_per_row; ++c) {
            out += ',';
            append_double(out, vals[c]);
        }
        out += '\n';
    }
    return out;
}

template <typename SnapT>
std::string to_binary(const SnapT& snap, const nlohmann::json& extra) {
    const ShapeTraits& tr = traits_for(snap);
    const std::string header = make_header(snap, extra).dump();
    std::string out;
    out.reserve(64 + header.size() +
                snap.particles.size() * (4 + 8 * static_cast<std::size_t>(tr.doubles_per_row)));
    out.append(kMagic, sizeof kMagic);
    const std::uint32_t ver = kFormatVersion;
    out.append(reinterpret_cast<const char*>(&ver), 4);
    const std::uint64_t hlen = header.size();
    out.append(reinterpret_cast<const char*>(&hlen), 8);
    out += header;
    double vals[8];
    for (const auto& p : snap.particles) {
        const std::uint32_t id = static_cast<std::uint32_t>(p.id);
        out.append(reinterpret_cast<const char*>(&id), 4);
        row_values(p, vals);
        out.append(reinterpret_cast<const char*>(vals), 8 * tr.doubles_per_row);
    }
    return out;
}

// Splits the non-core header keys back out so a rewrite reproduces them.
nlohmann::json extract_extra(const nlohmann::json& header) {
    static const char* core[] = {"box",    "count", "dimension", "format",          "iterations",
                                 "params", "seed",  "shape",     "version",         "volume_fraction"};
    nlohmann::json extra = nlohmann::json::object();
    for (const auto& [k, v] : header.items()) {
        bool is_core = false;
        for (const char* c : core)
            if (k == c) {
                is_core = true;
                break;
            }
        if (!is_core) extra[k] = v;
    }
    return extra;
}

template <typename SnapT>
SnapT snapshot_from_header(const nlohmann::json& header) {
    SnapT snap;
    const auto& box = require(header, "box");
    constexpr int N = decltype(SnapT::box)::dim();
    if (!box.is_array() || box.size() != static_cast<std::size_t>(N))
        throw IoError("snapshot header: box must list one length per axis");
    std::array<double, N> lengths;
    for (int a = 0; a < N; ++a) lengths[static_cast<std::size_t>(a)] = box[a].get<double>();
    snap.box = PeriodicBox<N>(lengths);
    snap.params = params_from_json(require(header, "params"));
    snap.seed = require(header, "seed").get<std::uint64_t>();
    snap.iteration_count = require(header, "iterations").get<std::int64_t>();
    snap.volume_fraction = require(header, "volume_fraction").get<double>();
    snap.particles.resize(require(header, "count").get<std::size_t>());
    return snap;
}

class RowReader {
  public:
    RowReader(const char* p, const char* end) : p_(p), end_(end) {}

    int read_int() {
        int v = 0;
        const auto res = std::from_chars(p_, end_, v);
        if (res.ec != std::errc()) throw IoError("snapshot row: malformed integer");
        p_ = res.ptr;
        return v;
    }

    double read_double() {
        expect(',');
        double v = 0.0;
        const auto res = std::from_chars(p_, end_, v);
        if (res.ec != std::errc()) throw IoError("snapshot row: malformed number");
        p_ = res.ptr;
        return v;
    }

    void finish_row() {
        expect('\n');
    }

    bool at_end() const { return p_ == end_; }

  private:
    void expect(char c) {
        if (p_ == end_ || *p_ != c)
            throw IoError(std::string("snapshot row: expected '") + c + "'");
        ++p_;
    }

    const char* p_;
    const char* end_;
};

template <typename SnapT>
SnapshotFile parse_text_rows(const nlohmann::json& header, const char* p, const char* end) {
    const ShapeTraits& tr = traits_for(SnapT{});
    SnapT snap = snapshot_from_header<SnapT>(header);

    // Column-name line must match the schema for this shape.
    const std::size_t cols_len = std::strlen(tr.columns);
    if (static_cast<std::size_t>(end - p) < cols_len + 1 ||
        std::memcmp(p, tr.columns, cols_len) != 0 || p[cols_len] != '\n')
        throw IoError("snapshot: column line does not match shape schema");
    p += cols_len + 1;

    RowReader r(p, end);
    double vals[8];
    for (auto& particle : snap.particles) {
        particle.id = r.read_int();
        for (int c = 0; c < tr.doubles_per_row; ++c) vals[c] = r.read_double();
        r.finish_row();
        from_row(particle, vals);
    }
    if (!r.at_end()) throw IoError("snapshot: trailing data after last row");

    SnapshotFile file{std::move(snap), extract_extra(header), false};
    return file;
}

template <typename SnapT>
SnapshotFile parse_binary_rows(const nlohmann::json& header, const char* p, const char* end) {
    const ShapeTraits& tr = traits_for(SnapT{});
    SnapT snap = snapshot_from_header<SnapT>(header);
    const std::size_t row_bytes = 4 + 8 * static_cast<std::size_t>(tr.doubles_per_row);
    if (static_cast<std::size_t>(end - p) != row_bytes * snap.particles.size())
        throw IoError("snapshot: binary payload size does not match count");
    double vals[8];
    for (auto& particle : snap.particles) {
        std::uint32_t id;
        std::memcpy(&id, p, 4);
        std::memcpy(vals, p + 4, 8 * tr.doubles_per_row);
        particle.id = static_cast<int>(id);
        from_row(particle, vals);
        p += row_bytes;
    }
    SnapshotFile file{std::move(snap), extract_extra(header), true};
    return file;
}

SnapshotFile dispatch_parse(const nlohmann::json& header, const char* p, const char* end,
                            bool binary) {
    const std::string shape = require(header, "shape").get<std::string>();
    const int dim = require(header, "dimension").get<int>();
    const auto version = require(header, "version").get<std::uint32_t>();
    if (version != kFormatVersion) throw IoError("snapshot: unsupported format version");
    if (require(header, "format").get<std::string>() != "srm-snapshot")
        throw IoError("snapshot: unrecognized format tag");

    if (shape == "disk" && dim == 2)
        return binary ? parse_binary_rows<DiskSnapshot>(header, p, end)
                      : parse_text_rows<DiskSnapshot>(header, p, end);
    if (shape == "sphere" && dim == 3)
        return binary ? parse_binary_rows<SphereSnapshot>(header, p, end)
                      : parse_text_rows<SphereSnapshot>(header, p, end);
    if (shape == "spherodisk" && dim == 3)
        return binary ? parse_binary_rows<PlateletSnapshot>(header, p, end)
                      : parse_text_rows<PlateletSnapshot>(header, p, end);
    throw IoError("snapshot: unknown shape/dimension combination '" + shape + "'");
}

}  // namespace

std::string snapshot_to_text(const DiskSnapshot& snap, const nlohmann::json& extra) {
    return to_text(snap, extra);
}
std::string snapshot_to_text(const SphereSnapshot& snap, const nlohmann::json& extra) {
    return to_text(snap, extra);
}
std::string snapshot_to_text(const PlateletSnapshot& snap, const nlohmann::json& extra) {
    return to_text(snap, extra);
}

std::string snapshot_to_binary(const DiskSnapshot& snap, const nlohmann::json& extra) {
    return to_binary(snap, extra);
}
std::string snapshot_to_binary(const SphereSnapshot& snap, const nlohmann::json& extra) {
    return to_binary(snap, extra);
}
std::string snapshot_to_binary(const PlateletSnapshot& snap, const nlohmann::json& extra) {
    return to_binary(snap, extra);
}

SnapshotFile parse_snapshot(const std::string& bytes) {
    if (bytes.size() >= sizeof kMagic && std::memcmp(bytes.data(), kMagic, sizeof kMagic) == 0) {
        const char* p = bytes.data() + sizeof kMagic;
        const char* end = bytes.data() + bytes.size();
        if (end - p < 12) throw IoError("snapshot: truncated binary header");
        std::uint32_t ver;
        std::memcpy(&ver, p, 4);
        p += 4;
        std::uint64_t hlen;
        std::memcpy(&hlen, p, 8);
        p += 8;
        if (static_cast<std::uint64_t>(end - p) < hlen)
            throw IoError("snapshot: truncated binary header");
        nlohmann::json header;
        try {
            header = nlohmann::json::parse(p, p + hlen);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(std::string("snapshot: bad header JSON: ") + e.what());
        }
        if (ver != kFormatVersion) throw IoError("snapshot: unsupported format version");
        return dispatch_parse(header, p + hlen, end, true);
    }

    const std::size_t eol = bytes.find('\n');
    if (eol == std::string::npos) throw IoError("snapshot: missing header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.data(), bytes.data() + eol);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("snapshot: bad header JSON: ") + e.what());
    }
    return dispatch_parse(header, bytes.data() + eol + 1, bytes.data() + bytes.size(), false);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    // Unique sibling name keeps the final rename atomic on one filesystem.
    static std::atomic<std::uint64_t> counter{0};
    const fs::path tmp =
        dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
               std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("rename failed for " + path.string() + ": " + ec.message());
    }
}

SnapshotFile load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return parse_snapshot(bytes);
}

void save_snapshot(const std::filesystem::path& path, const SnapshotFile& file) {
    std::visit(
        [&](const auto& snap) {
            write_file_atomic(path, file.binary ? snapshot_to_binary(snap, file.extra)
                                                : snapshot_to_text(snap, file.extra));
        },
        file.data);
}

}  // namespace srm
