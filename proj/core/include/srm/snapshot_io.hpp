#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "srm/snapshots.hpp"

namespace srm {

// A snapshot file as loaded from disk: the typed data plus any header
// fields outside the core schema (kept so a rewrite reproduces the file
// byte for byte) and which encoding it used.
struct SnapshotFile {
    std::variant<DiskSnapshot, SphereSnapshot, PlateletSnapshot> data;
    nlohmann::json extra = nlohmann::json::object();
    bool binary = false;
};

// Text encoding: one JSON header line, one column-name line, then one CSV
// row per particle with shortest round-trip float formatting. Binary
// encoding: magic, header JSON, then fixed-width little-endian rows.
std::string snapshot_to_text(const DiskSnapshot& snap, const nlohmann::json& extra = {});
std::string snapshot_to_text(const SphereSnapshot& snap, const nlohmann::json& extra = {});
std::string snapshot_to_text(const PlateletSnapshot& snap, const nlohmann::json& extra = {});

std::string snapshot_to_binary(const DiskSnapshot& snap, const nlohmann::json& extra = {});
std::string snapshot_to_binary(const SphereSnapshot& snap, const nlohmann::json& extra = {});
std::string snapshot_to_binary(const PlateletSnapshot& snap, const nlohmann::json& extra = {});

SnapshotFile parse_snapshot(const std::string& bytes);

// Atomic write: the content lands under a temporary name in the target
// directory and is renamed into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

SnapshotFile load_snapshot(const std::filesystem::path& path);
void save_snapshot(const std::filesystem::path& path, const SnapshotFile& file);

template <typename SnapT>
void save_snapshot(const std::filesystem::path& path, const SnapT& snap,
                   const nlohmann::json& extra = {}, bool binary = false) {
    write_file_atomic(path, binary ? snapshot_to_binary(snap, extra)
                                   : snapshot_to_text(snap, extra));
}

}  // namespace srm
