#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgpvm/cpu_common.hpp"

namespace sgpvm::bench {

/// The five microbenchmarks, in table order.
[[nodiscard]] std::span<const std::string_view> benchmark_names();
/// Agent counts of the sweep.
[[nodiscard]] std::span<const std::size_t> agent_sweep();

/// "lite" for the lite backend, "vanilla" for flex.
[[nodiscard]] std::string_view implementation_name(Backend backend);
[[nodiscard]] Backend backend_from_implementation(std::string_view name);

/// One timing row in the published table layout. Times are per agent per
/// pass, rounded to 0.01 ns.
struct BenchRecord {
  std::string library;
  std::string implementation;
  double wall_ns = 0.0;
  double cpu_ns = 0.0;
  std::size_t num_agents = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchOptions {
  std::chrono::nanoseconds min_time = std::chrono::milliseconds(100);
  std::size_t program_length = 100;
  std::size_t cycles = 100;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument for an unknown benchmark, an agent count
/// outside the sweep, or zero replicates. Checked before any timing.
void validate_request(std::string_view name, std::size_t num_agents,
                      std::size_t replicates);

/// One record per replicate. Each replicate builds a fresh agent set (same
/// seeds every time), runs one untimed warm-up pass, then repeats timed
/// passes until `min_time` has elapsed. A pass launches one core per agent,
/// steps `cycles`, and kills the cores; the control benchmark's pass only
/// touches each agent handle. Times are per agent per pass.
[[nodiscard]] std::vector<BenchRecord> run_microbenchmark(
    std::string_view name, Backend backend, std::size_t num_agents,
    std::size_t replicates, const BenchOptions& options = {});

/// Same measurements for several backends, alternating backends replicate by
/// replicate so slow drift in machine speed hits every backend alike.
[[nodiscard]] std::vector<BenchRecord> run_interleaved(
    std::string_view name, std::span<const Backend> backends,
    std::size_t num_agents, std::size_t replicates,
    const BenchOptions& options = {});

/// Deterministic fingerprint of a workload: hashes every agent's program
/// and the cpu state after one pass. Used for replaying bench runs, since
/// the timings themselves never repeat.
[[nodiscard]] std::string workload_digest(std::string_view name,
                                          Backend backend,
                                          std::size_t num_agents,
                                          const BenchOptions& options = {});

struct SpeedupRow {
  std::string library;
  std::size_t num_agents = 0;
  std::optional<double> vanilla_median_ns;
  std::optional<double> lite_median_ns;
  /// median(vanilla wall) / median(lite wall); absent when either side is.
  std::optional<double> speedup;
};

/// One row per (library, num_agents) cell present in `records`, sorted by
/// benchmark order then agent count. Cells missing a backend keep an empty
/// speedup instead of being dropped.
[[nodiscard]] std::vector<SpeedupRow> compute_speedup(
    std::span<const BenchRecord> records);

[[nodiscard]] double median(std::vector<double> values);

inline constexpr std::string_view kCsvHeader =
    "Library,Implementation,Wall Nanoseconds,CPU Nanoseconds,num agents";

[[nodiscard]] std::string records_csv(std::span<const BenchRecord> records);
/// Throws std::runtime_error naming the offending line.
[[nodiscard]] std::vector<BenchRecord> parse_records_csv(std::string_view text);
void emit_csv(std::span<const BenchRecord> records,
              const std::filesystem::path& path);

[[nodiscard]] std::string speedup_csv(std::span<const SpeedupRow> rows);

}  // namespace sgpvm::bench
