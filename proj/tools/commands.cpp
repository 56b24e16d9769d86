#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sgpvm/bench.hpp"
#include "sgpvm/checksum.hpp"
#include "sgpvm/evolution.hpp"
#include "sgpvm/experiment_config.hpp"
#include "sgpvm/genome_io.hpp"
#include "sgpvm/manifest.hpp"

namespace sgpvm::cli {
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kBenchProgramLength = 100;
constexpr std::size_t kBenchCycles = 100;

struct ReplicateOutcome {
  std::string history;
  std::optional<std::size_t> solved_at;
  std::size_t last_generation = 0;
};

std::string history_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "replicate_%04zu.csv", index);
  return buf;
}

std::string summary_csv(const std::vector<ReplicateEntry>& entries) {
  std::string out = "replicate,solved,generations\n";
  for (const auto& e : entries) {
    out += std::to_string(e.index) + ',' + (e.solved ? '1' : '0') + ',' +
           std::to_string(e.generations) + '\n';
  }
  return out;
}

ReplicateOutcome run_replicate(const EvolutionConfig& evo) {
  const EvolutionResult result = run_evolution(evo);
  return {history_csv(result.history), result.solved_at,
          result.history.back().generation};
}

// Runs `count` independent jobs on up to `jobs` threads; results land in
// index order so output never depends on scheduling.
template <typename Fn>
auto parallel_map(std::size_t count, std::size_t jobs, Fn fn) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  if (count == 0) return out;
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

EvolutionConfig replicate_config(const ExperimentConfig& cfg,
                                 const std::optional<std::string>& genome,
                                 std::size_t index, std::uint64_t seed) {
  ExperimentConfig copy = cfg;
  copy.ancestor.clear();
  EvolutionConfig evo = copy.evolution_config(index);
  if (genome) evo.ancestor = parse_genome(*genome).program;
  evo.seed = seed;
  return evo;
}

template <typename Fn>
int guard(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const GenomeParseError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int replay_evolve(const GlobalOptions& global, const ReplayOptions& opts,
                  const std::string& text, std::ostream& log) {
  const EvolveManifest m = parse_evolve_manifest(text);
  const ExperimentConfig cfg = parse_experiment_config(m.config);
  if (opts.replicate && *opts.replicate >= m.replicates.size()) {
    throw std::invalid_argument(
        "replicate index " + std::to_string(*opts.replicate) +
        " out of range (manifest has " + std::to_string(m.replicates.size()) +
        ")");
  }
  const fs::path out_dir = global.out_dir.value_or("replay");
  std::vector<std::size_t> picks;
  if (opts.replicate) {
    picks.push_back(*opts.replicate);
  } else {
    for (std::size_t i = 0; i < m.replicates.size(); ++i) picks.push_back(i);
  }

  bool all_match = true;
  std::vector<ReplicateEntry> recomputed = m.replicates;
  for (std::size_t i : picks) {
    const ReplicateEntry& entry = m.replicates[i];
    const auto outcome =
        run_replicate(replicate_config(cfg, m.ancestor_genome, i, entry.seed));
    write_text_file(out_dir / entry.history_file, outcome.history);
    const std::string sha = sha256_hex(outcome.history);
    const bool match = sha == entry.history_sha256;
    all_match = all_match && match;
    recomputed[i].solved = outcome.solved_at.has_value();
    recomputed[i].solved_at = outcome.solved_at;
    recomputed[i].generations = outcome.last_generation;
    log << "replicate " << i << ": "
        << (match ? "match" : "checksum mismatch") << " (" << sha << ")\n";
  }
  if (!opts.replicate) {
    const std::string summary = summary_csv(recomputed);
    write_text_file(out_dir / m.summary_file, summary);
    const bool match = sha256_hex(summary) == m.summary_sha256;
    all_match = all_match && match;
    log << "summary: " << (match ? "match" : "checksum mismatch") << '\n';
  }
  return all_match ? kOk : kRuntimeError;
}

int replay_bench(const GlobalOptions& global, const std::string& text,
                 std::ostream& log) {
  const BenchManifest m = parse_bench_manifest(text);
  const std::string workload =
      workload_csv(m.benchmarks, m.backends, m.agents, m.seed,
                   m.program_length, m.cycles);
  const fs::path out_dir = global.out_dir.value_or("replay");
  write_text_file(out_dir / m.workload_file, workload);
  const bool match = sha256_hex(workload) == m.workload_sha256;
  log << "workload: " << (match ? "match" : "checksum mismatch") << '\n';
  return match ? kOk : kRuntimeError;
}

}  // namespace

std::string workload_csv(const std::vector<std::string>& benchmarks,
                         const std::vector<Backend>& backends,
                         const std::vector<std::size_t>& agents,
                         std::uint64_t seed, std::size_t program_length,
                         std::size_t cycles) {
  bench::BenchOptions options;
  options.seed = seed;
  options.program_length = program_length;
  options.cycles = cycles;
  std::string out = "Library,Implementation,num agents,Workload SHA256\n";
  for (const auto& name : benchmarks) {
    for (Backend backend : backends) {
      for (std::size_t n : agents) {
        out += name + ',' + std::string(bench::implementation_name(backend)) +
               ',' + std::to_string(n) + ',' +
               bench::workload_digest(name, backend, n, options) + '\n';
      }
    }
  }
  return out;
}

int cmd_evolve(const GlobalOptions& global, const EvolveOptions& opts,
               std::ostream& log) {
  return guard(log, [&] {
    ExperimentConfig cfg = load_experiment_config(opts.config);
    if (global.seed) cfg.seed = *global.seed;
    if (global.backend) cfg.backend = *global.backend;
    cfg = cfg.with_resolved_tags();
    cfg.validate();

    std::optional<std::string> genome;
    if (!cfg.ancestor.empty()) {
      fs::path path(cfg.ancestor);
      if (path.is_relative()) path = opts.config.parent_path() / path;
      genome = read_text_file(path);
      (void)parse_genome(*genome);
    }
    // Surface config-level problems (bad ancestor opcodes and the like)
    // before any replicate starts.
    replicate_config(cfg, genome, 0, cfg.replicate_seed(0)).validate();

    const fs::path out_dir = global.out_dir.value_or(cfg.output_dir);
    fs::create_directories(out_dir);
    log << "evolve: " << cfg.replicates << " replicate(s) of "
        << problem_name(cfg.problem) << " on " << backend_name(cfg.backend)
        << " -> " << out_dir.string() << '\n';

    const auto outcomes =
        parallel_map(cfg.replicates, opts.jobs, [&](std::size_t i) {
          return run_replicate(
              replicate_config(cfg, genome, i, cfg.replicate_seed(i)));
        });

    EvolveManifest m;
    m.artifact_version = artifact_version();
    m.config = serialize_experiment_config(cfg);
    m.ancestor_genome = genome;
    m.summary_file = "summary.csv";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      ReplicateEntry e;
      e.index = i;
      e.seed = cfg.replicate_seed(i);
      e.solved = o.solved_at.has_value();
      e.solved_at = o.solved_at;
      e.generations = o.last_generation;
      e.history_file = history_name(i);
      e.history_sha256 = sha256_hex(o.history);
      write_text_file(out_dir / e.history_file, o.history);
      log << "replicate " << i << ": "
          << (e.solved ? "solved at generation " : "unsolved after ")
          << e.generations << '\n';
      m.replicates.push_back(std::move(e));
    }
    const std::string summary = summary_csv(m.replicates);
    m.summary_sha256 = sha256_hex(summary);
    write_text_file(out_dir / m.summary_file, summary);
    write_text_file(out_dir / "manifest.json", to_json(m));
    return kOk;
  });
}

int cmd_bench(const GlobalOptions& global, const BenchOptions& opts,
              std::ostream& log) {
  return guard(log, [&] {
    std::vector<std::string> names = opts.benchmarks;
    if (names.empty()) {
      for (auto n : bench::benchmark_names()) names.emplace_back(n);
    }
    std::vector<std::size_t> agents = opts.agents;
    if (agents.empty()) {
      agents.assign(bench::agent_sweep().begin(), bench::agent_sweep().end());
    }
    std::vector<Backend> backends;
    if (global.backend) {
      backends.push_back(*global.backend);
    } else {
      backends = {Backend::flex, Backend::lite};
    }
    if (opts.min_time_ms < 1) {
      throw std::invalid_argument("--min-time-ms must be >= 1");
    }
    for (const auto& name : names) {
      for (std::size_t n : agents) {
        bench::validate_request(name, n, opts.replicates);
      }
    }

    bench::BenchOptions options;
    options.min_time = std::chrono::milliseconds(opts.min_time_ms);
    options.program_length = kBenchProgramLength;
    options.cycles = kBenchCycles;
    options.seed = global.seed.value_or(1);

    fs::path out = opts.out;
    if (out.is_relative() && global.out_dir) out = *global.out_dir / out;
    const fs::path dir = out.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    const std::string stem = out.stem().string();

    std::vector<bench::BenchRecord> records;
    for (const auto& name : names) {
      for (std::size_t n : agents) {
        log << "bench " << name << " agents=" << n
            << " replicates=" << opts.replicates << '\n';
        auto rows = bench::run_interleaved(name, backends, n, opts.replicates,
                                           options);
        records.insert(records.end(), rows.begin(), rows.end());
      }
    }
    bench::emit_csv(records, out);
    const auto speedup = bench::compute_speedup(records);
    const fs::path speedup_path = dir / (stem + "_speedup.csv");
    write_text_file(speedup_path, bench::speedup_csv(speedup));

    BenchManifest m;
    m.artifact_version = artifact_version();
    m.benchmarks = names;
    m.backends = backends;
    m.agents = agents;
    m.replicates = opts.replicates;
    m.seed = options.seed;
    m.min_time_ns = std::chrono::nanoseconds(options.min_time).count();
    m.program_length = options.program_length;
    m.cycles = options.cycles;
    m.records_file = out.filename().string();
    m.speedup_file = speedup_path.filename().string();
    m.workload_file = stem + "_workload.csv";
    const std::string workload =
        workload_csv(names, backends, agents, options.seed,
                     options.program_length, options.cycles);
    m.workload_sha256 = sha256_hex(workload);
    write_text_file(dir / m.workload_file, workload);
    write_text_file(dir / (stem + "_manifest.json"), to_json(m));

    for (const auto& row : speedup) {
      if (row.speedup) {
        log << row.library << " agents=" << row.num_agents
            << " speedup=" << *row.speedup << '\n';
      }
    }
    return kOk;
  });
}

int cmd_replay(const GlobalOptions& global, const ReplayOptions& opts,
               std::ostream& log) {
  return guard(log, [&] {
    const std::string text = read_text_file(opts.manifest);
    const std::string kind = manifest_kind(text);
    if (kind == "evolve") return replay_evolve(global, opts, text, log);
    if (kind == "bench") return replay_bench(global, text, log);
    throw ManifestError("unknown manifest kind '" + kind + "'");
  });
}

}  // namespace sgpvm::cli
