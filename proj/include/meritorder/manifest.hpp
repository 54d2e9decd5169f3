#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meritorder {

inline constexpr std::string_view kManifestFile = "manifest.json";

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Record of one CLI run, written next to its outputs.
struct RunManifest {
  std::string command;
  std::string config;  // canonical JSON of the effective configuration
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // file name, sha256
  std::optional<std::uint64_t> seed;
  std::string rng_algorithm;
  std::string data_start;  // first hour covered, ISO-8601
  std::string data_end;    // last hour covered
  std::vector<std::string> warnings;
};

/// Creation time stamped into manifests: SOURCE_DATE_EPOCH when set (for
/// reproducible output trees), otherwise the current UTC time.
std::string manifest_created_time();

std::string manifest_json(const RunManifest& manifest);

/// Hashes every listed output file in `dir` and writes manifest.json there.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest,
                    const std::vector<std::string>& output_files);

}  // namespace meritorder
