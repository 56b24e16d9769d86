#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgpvm/cpu_common.hpp"

namespace sgpvm::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

/// Flags accepted before or after any subcommand.
struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<Backend> backend;
  std::optional<std::filesystem::path> out_dir;
};

struct EvolveOptions {
  std::filesystem::path config;
  std::size_t jobs = 1;
};

struct BenchOptions {
  std::vector<std::string> benchmarks;  ///< empty means all five
  std::vector<std::size_t> agents;      ///< empty means the full sweep
  std::size_t replicates = 20;
  std::filesystem::path out = "bench.csv";
  std::int64_t min_time_ms = 100;
};

struct ReplayOptions {
  std::filesystem::path manifest;
  std::optional<std::size_t> replicate;
};

// Each command reports progress on `log` and returns an ExitCode. Config and
// flag problems map to kConfigError; I/O failures and replay mismatches to
// kRuntimeError.
int cmd_evolve(const GlobalOptions& global, const EvolveOptions& opts,
               std::ostream& log);
int cmd_bench(const GlobalOptions& global, const BenchOptions& opts,
              std::ostream& log);
int cmd_replay(const GlobalOptions& global, const ReplayOptions& opts,
               std::ostream& log);

/// `Library,Implementation,num agents,Workload SHA256` rows for every
/// (benchmark, backend, agents) cell; the replayable part of a bench run.
[[nodiscard]] std::string workload_csv(const std::vector<std::string>& benchmarks,
                                       const std::vector<Backend>& backends,
                                       const std::vector<std::size_t>& agents,
                                       std::uint64_t seed,
                                       std::size_t program_length,
                                       std::size_t cycles);

}  // namespace sgpvm::cli
