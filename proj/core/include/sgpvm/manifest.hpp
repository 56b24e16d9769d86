#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgpvm/cpu_common.hpp"

namespace sgpvm {

inline constexpr int kManifestVersion = 1;

/// Unreadable, malformed, or version-mismatched manifest.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReplicateEntry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool solved = false;
  std::optional<std::size_t> solved_at;
  std::size_t generations = 0;  ///< generations evaluated, including gen 0
  std::string history_file;
  std::string history_sha256;

  friend bool operator==(const ReplicateEntry&, const ReplicateEntry&) = default;
};

struct EvolveManifest {
  std::string artifact_version;
  /// Serialized experiment config with every signal tag written out.
  std::string config;
  /// Ancestor genome text, when the experiment starts from one.
  std::optional<std::string> ancestor_genome;
  std::vector<ReplicateEntry> replicates;
  std::string summary_file;
  std::string summary_sha256;

  friend bool operator==(const EvolveManifest&, const EvolveManifest&) = default;
};

struct BenchManifest {
  std::string artifact_version;
  std::vector<std::string> benchmarks;
  std::vector<Backend> backends;
  std::vector<std::size_t> agents;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::int64_t min_time_ns = 0;
  std::size_t program_length = 0;
  std::size_t cycles = 0;
  std::string records_file;
  std::string speedup_file;
  /// Deterministic output of the run: one digest per workload cell.
  std::string workload_file;
  std::string workload_sha256;

  friend bool operator==(const BenchManifest&, const BenchManifest&) = default;
};

/// Version string compiled into the library.
[[nodiscard]] std::string artifact_version();

[[nodiscard]] std::string to_json(const EvolveManifest& m);
[[nodiscard]] std::string to_json(const BenchManifest& m);

/// "evolve" or "bench"; throws ManifestError on malformed input or an
/// unsupported manifest version.
[[nodiscard]] std::string manifest_kind(const std::string& json_text);
[[nodiscard]] EvolveManifest parse_evolve_manifest(const std::string& json_text);
[[nodiscard]] BenchManifest parse_bench_manifest(const std::string& json_text);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace sgpvm
