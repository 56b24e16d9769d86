#include "sgpvm/bench.hpp"

#include <time.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>

#include "sgpvm/backend.hpp"
#include "sgpvm/checksum.hpp"
#include "sgpvm/genome_io.hpp"
#include "sgpvm/instruction_set.hpp"

namespace sgpvm::bench {
namespace {

constexpr std::array<std::string_view, 5> kNames = {
    "control", "nop", "arithmetic", "complete", "sans_regulation"};
constexpr std::array<std::size_t, 4> kSweep = {1, 32, 1024, 32768};

inline void keep_alive(std::size_t value) {
  asm volatile("" : : "r"(value) : "memory");
}

// Shared by both backends so the control benchmark times identical code.
[[gnu::noinline]] void control_pass(std::size_t num_agents) {
  for (std::size_t i = 0; i < num_agents; ++i) keep_alive(i);
}

// Records carry exactly the precision the CSV keeps.
double to_hundredths(double ns) { return std::round(ns * 100.0) / 100.0; }

std::int64_t thread_cpu_ns() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<std::int64_t>(ts.tv_sec) * 1'000'000'000 + ts.tv_nsec;
}

// Benchmark programs are a single module, so GlobalAnchor is left out of the
// draw. Control agents hold nop programs.
InstructionSet workload_set(std::string_view name) {
  const auto set = instruction_set_by_name(name == "control" ? "nop" : name);
  return set.without(set.name(),
                     [](Opcode op) { return op == Opcode::GlobalAnchor; });
}

template <typename Cpu>
struct Workload {
  std::vector<Cpu> cpus;
  std::vector<Tag> signals;
  std::vector<std::shared_ptr<const Program>> programs;
};

template <typename Cpu>
Workload<Cpu> build_workload(std::string_view name, std::size_t num_agents,
                             const BenchOptions& options) {
  const InstructionSet set = workload_set(name);
  Workload<Cpu> w;
  w.cpus.reserve(num_agents);
  w.signals.reserve(num_agents);
  w.programs.reserve(num_agents);
  for (std::size_t i = 0; i < num_agents; ++i) {
    Rng rng(derive_seed(options.seed, {i}));
    auto program = std::make_shared<const Program>(
        random_program(set, options.program_length, rng));
    w.signals.push_back(Tag{rng.next()});
    w.cpus.emplace_back(program, CpuConfig{}, rng.next());
    w.programs.push_back(std::move(program));
  }
  return w;
}

template <typename Cpu>
void run_pass(Workload<Cpu>& w, bool control, std::size_t cycles) {
  if (control) {
    control_pass(w.cpus.size());
    return;
  }
  for (std::size_t i = 0; i < w.cpus.size(); ++i) {
    Cpu& cpu = w.cpus[i];
    cpu.launch(w.signals[i]);
    cpu.step(cycles);
    cpu.kill_all_cores();
  }
}

template <typename Cpu>
BenchRecord time_replicate(std::string_view name, Backend backend,
                           std::size_t num_agents,
                           const BenchOptions& options) {
  auto workload = build_workload<Cpu>(name, num_agents, options);
  const bool control = name == "control";
  run_pass(workload, control, options.cycles);

  using clock = std::chrono::steady_clock;
  std::uint64_t passes = 0;
  const auto wall_start = clock::now();
  const auto cpu_start = thread_cpu_ns();
  auto wall_now = wall_start;
  do {
    run_pass(workload, control, options.cycles);
    ++passes;
    wall_now = clock::now();
  } while (wall_now - wall_start < options.min_time);
  const auto cpu_end = thread_cpu_ns();

  const double denom = static_cast<double>(passes) *
                       static_cast<double>(num_agents);
  BenchRecord rec;
  rec.library = std::string(name);
  rec.implementation = std::string(implementation_name(backend));
  rec.wall_ns = to_hundredths(
      static_cast<double>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(wall_now -
                                                               wall_start)
              .count()) /
      denom);
  rec.cpu_ns = to_hundredths(static_cast<double>(cpu_end - cpu_start) / denom);
  rec.num_agents = num_agents;
  return rec;
}

std::string format_fixed2(double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  if (ec != std::errc{}) throw std::runtime_error("unformattable value");
  return std::string(buf, end);
}

std::string format_shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::size_t benchmark_rank(std::string_view name) {
  const auto it = std::find(kNames.begin(), kNames.end(), name);
  return static_cast<std::size_t>(it - kNames.begin());
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::span<const std::string_view> benchmark_names() { return kNames; }
std::span<const std::size_t> agent_sweep() { return kSweep; }

std::string_view implementation_name(Backend backend) {
  return backend == Backend::lite ? "lite" : "vanilla";
}

Backend backend_from_implementation(std::string_view name) {
  if (name == "lite") return Backend::lite;
  if (name == "vanilla") return Backend::flex;
  throw std::invalid_argument("unknown implementation '" + std::string(name) +
                              "'");
}

void validate_request(std::string_view name, std::size_t num_agents,
                      std::size_t replicates) {
  if (std::find(kNames.begin(), kNames.end(), name) == kNames.end()) {
    throw std::invalid_argument("unknown benchmark '" + std::string(name) +
                                "'");
  }
  if (std::find(kSweep.begin(), kSweep.end(), num_agents) == kSweep.end()) {
    throw std::invalid_argument("agent count " + std::to_string(num_agents) +
                                " not in sweep {1, 32, 1024, 32768}");
  }
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be >= 1");
  }
}

std::vector<BenchRecord> run_microbenchmark(std::string_view name,
                                            Backend backend,
                                            std::size_t num_agents,
                                            std::size_t replicates,
                                            const BenchOptions& options) {
  validate_request(name, num_agents, replicates);
  std::vector<BenchRecord> out;
  out.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    out.push_back(with_backend(backend, [&]<typename Cpu>() {
      return time_replicate<Cpu>(name, backend, num_agents, options);
    }));
  }
  return out;
}

std::vector<BenchRecord> run_interleaved(std::string_view name,
                                         std::span<const Backend> backends,
                                         std::size_t num_agents,
                                         std::size_t replicates,
                                         const BenchOptions& options) {
  validate_request(name, num_agents, replicates);
  std::vector<BenchRecord> out;
  out.reserve(replicates * backends.size());
  for (std::size_t r = 0; r < replicates; ++r) {
    for (Backend backend : backends) {
      out.push_back(with_backend(backend, [&]<typename Cpu>() {
        return time_replicate<Cpu>(name, backend, num_agents, options);
      }));
    }
  }
  return out;
}

std::string workload_digest(std::string_view name, Backend backend,
                            std::size_t num_agents,
                            const BenchOptions& options) {
  validate_request(name, num_agents, 1);
  return with_backend(backend, [&]<typename Cpu>() {
    auto workload = build_workload<Cpu>(name, num_agents, options);
    const InstructionSet set = workload_set(name);
    std::string state;
    for (const auto& program : workload.programs) {
      state += serialize_genome(*program, set);
    }
    if (name != "control") {
      for (std::size_t i = 0; i < workload.cpus.size(); ++i) {
        Cpu& cpu = workload.cpus[i];
        cpu.launch(workload.signals[i]);
        cpu.step(options.cycles);
        state += std::to_string(cpu.active_cores()) + ' ' +
                 std::to_string(cpu.rng().draws()) + ' ' +
                 std::to_string(cpu.cache().generation()) + ' ' +
                 std::to_string(cpu.responses().expressions);
        for (const CoreView& core : cpu.cores()) {
          state += ' ' + std::to_string(core.ip);
          for (double r : core.registers) {
            state += ' ' + std::to_string(std::bit_cast<std::uint64_t>(r));
          }
        }
        for (double reg : cpu.regulators()) {
          state += ' ' + std::to_string(std::bit_cast<std::uint64_t>(reg));
        }
        state += '\n';
        cpu.kill_all_cores();
      }
    }
    return sha256_hex(state);
  });
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<SpeedupRow> compute_speedup(std::span<const BenchRecord> records) {
  struct Cell {
    std::vector<double> vanilla;
    std::vector<double> lite;
  };
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::string, Cell>>
      cells;
  for (const BenchRecord& rec : records) {
    auto& [library, cell] =
        cells[{benchmark_rank(rec.library), rec.num_agents}];
    library = rec.library;
    if (backend_from_implementation(rec.implementation) == Backend::lite) {
      cell.lite.push_back(rec.wall_ns);
    } else {
      cell.vanilla.push_back(rec.wall_ns);
    }
  }
  std::vector<SpeedupRow> rows;
  for (auto& [key, entry] : cells) {
    SpeedupRow row;
    row.library = entry.first;
    row.num_agents = key.second;
    if (!entry.second.vanilla.empty()) {
      row.vanilla_median_ns = median(entry.second.vanilla);
    }
    if (!entry.second.lite.empty()) {
      row.lite_median_ns = median(entry.second.lite);
    }
    if (row.vanilla_median_ns && row.lite_median_ns && *row.lite_median_ns > 0) {
      row.speedup = *row.vanilla_median_ns / *row.lite_median_ns;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string records_csv(std::span<const BenchRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const BenchRecord& r : records) {
    out += r.library + ',' + r.implementation + ',' + format_fixed2(r.wall_ns) +
           ',' + format_fixed2(r.cpu_ns) + ',' + std::to_string(r.num_agents) +
           '\n';
  }
  return out;
}

std::vector<BenchRecord> parse_records_csv(std::string_view text) {
  const auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != kCsvHeader) {
    throw std::runtime_error("bench csv: header mismatch");
  }
  std::vector<BenchRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    const auto fields = split(lines[i], ',');
    auto fail = [&] {
      return std::runtime_error("bench csv: malformed line " +
                                std::to_string(i + 1));
    };
    if (fields.size() != 5) throw fail();
    BenchRecord rec;
    rec.library = std::string(fields[0]);
    rec.implementation = std::string(fields[1]);
    auto num = [&](std::string_view s, auto& v) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) throw fail();
    };
    num(fields[2], rec.wall_ns);
    num(fields[3], rec.cpu_ns);
    num(fields[4], rec.num_agents);
    out.push_back(std::move(rec));
  }
  return out;
}

void emit_csv(std::span<const BenchRecord> records,
              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << records_csv(records);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string speedup_csv(std::span<const SpeedupRow> rows) {
  std::string out =
      "Library,num agents,Vanilla Median Wall Nanoseconds,"
      "Lite Median Wall Nanoseconds,Speedup\n";
  auto opt = [](const std::optional<double>& v, bool fixed) {
    if (!v) return std::string("NA");
    return fixed ? format_fixed2(*v) : format_shortest(*v);
  };
  for (const SpeedupRow& row : rows) {
    out += row.library + ',' + std::to_string(row.num_agents) + ',' +
           opt(row.vanilla_median_ns, true) + ',' +
           opt(row.lite_median_ns, true) + ',' + opt(row.speedup, false) + '\n';
  }
  return out;
}

}  // namespace sgpvm::bench
