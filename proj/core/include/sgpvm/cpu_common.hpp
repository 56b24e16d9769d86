#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sgpvm/program.hpp"
#include "sgpvm/rng.hpp"
#include "sgpvm/tag.hpp"
#include "sgpvm/tag_match.hpp"

namespace sgpvm {

struct CpuConfig {
  std::size_t core_capacity = 16;
  double min_raw = 0.0;
  /// Runtime register-file size; only the flex backend reads it and it must
  /// be at least kRegisterCount.
  std::size_t register_count = kRegisterCount;
};

/// Most recent Response_k expressed since the last reset.
struct ResponseBuffer {
  std::optional<std::size_t> last_response;
  std::uint64_t expressions = 0;

  void record(std::size_t k) {
    last_response = k;
    ++expressions;
  }
  void reset() {
    last_response.reset();
    expressions = 0;
  }
};

struct CoreView {
  std::uint64_t id = 0;
  std::size_t ip = 0;
  std::span<const double> registers;
};

enum class Backend { lite, flex };

[[nodiscard]] std::string_view backend_name(Backend b);
/// "lite" or "flex"; throws std::invalid_argument otherwise.
[[nodiscard]] Backend backend_from_name(std::string_view name);

/// Called once per executed instruction with the registers as they are
/// after execution.
using StepObserverSignature = void(std::uint64_t cycle, std::uint64_t core_id,
                                   Opcode opcode,
                                   std::span<const double> registers);

template <typename Cpu>
concept VirtualCpu = requires(Cpu cpu, const Cpu ccpu, Tag tag, std::size_t n) {
  { Cpu(std::shared_ptr<const Program>{}, CpuConfig{}, std::uint64_t{}) };
  { cpu.launch(tag) } -> std::same_as<bool>;
  { cpu.step(n) };
  { cpu.kill_all_cores() };
  { ccpu.active_cores() } -> std::same_as<std::size_t>;
  { ccpu.regulators() } -> std::same_as<std::span<const double>>;
  { cpu.write_regulator(n, 0.0) };
  { ccpu.cache() } -> std::same_as<const MatchCache&>;
  { ccpu.rng() } -> std::same_as<const Rng&>;
  { cpu.responses() } -> std::same_as<ResponseBuffer&>;
  { ccpu.cores() } -> std::same_as<std::vector<CoreView>>;
};

}  // namespace sgpvm
