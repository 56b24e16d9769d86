#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sgpvm/cpu_common.hpp"
#include "sgpvm/instruction_set.hpp"
#include "sgpvm/program.hpp"
#include "sgpvm/rng.hpp"
#include "sgpvm/tag.hpp"

namespace sgpvm {

/// K mutually exclusive signals; the organism must answer signal k with
/// Response_k.
struct ChangingEnvConfig {
  std::vector<Tag> signal_tags;
  std::size_t cycles_per_signal = 128;
  CpuConfig cpu;

  [[nodiscard]] std::size_t k() const { return signal_tags.size(); }
  [[nodiscard]] InstructionSet instruction_set() const {
    return sets::changing_env(k());
  }
  /// K in {2, 4, 8, 16}, tags pairwise distinct, cycles > 0.
  void validate() const;

  /// K distinct uniformly random tags.
  [[nodiscard]] static ChangingEnvConfig generate(std::size_t k, Rng& rng);
};

using ResponseTable = std::array<std::array<std::uint8_t, 4>, 4>;

/// (i + j) mod 4: every row and column holds all four responses.
[[nodiscard]] ResponseTable default_response_table();

/// Ordered (first, second) signal pairs, 4 x 4 = 16 cases. Case index is
/// first * 4 + second.
struct ContextualSignalConfig {
  static constexpr std::size_t kSignals = 4;
  static constexpr std::size_t kCases = kSignals * kSignals;

  std::array<Tag, kSignals> first_signals{};
  std::array<Tag, kSignals> second_signals{};
  ResponseTable response_table = default_response_table();
  std::size_t cycles_per_signal = 128;
  bool regulation = true;
  CpuConfig cpu;

  [[nodiscard]] InstructionSet instruction_set() const {
    return sets::contextual_signal(regulation);
  }
  /// All eight tags distinct, table entries < 4, cycles > 0.
  void validate() const;

  [[nodiscard]] static ContextualSignalConfig generate(Rng& rng);
};

/// Per-signal pass vector, indexed by signal k. Signals are presented in an
/// order shuffled by `seed`; the response buffer is reset before each one
/// and cores are not killed in between. The cpu's PRNG is also seeded from
/// `seed`.
[[nodiscard]] std::vector<bool> eval_changing_environment_cases(
    const Program& program, const ChangingEnvConfig& cfg, std::uint64_t seed,
    Backend backend = Backend::lite);

/// Number of correctly answered signals, in [0, K].
[[nodiscard]] double eval_changing_environment(const Program& program,
                                               const ChangingEnvConfig& cfg,
                                               std::uint64_t seed,
                                               Backend backend = Backend::lite);

/// 16-element pass vector. Each case runs on a fresh cpu: first signal,
/// `cycles_per_signal` cycles, kill all cores (regulators survive), reset
/// responses, second signal, another `cycles_per_signal` cycles, compare
/// the last response with the table.
[[nodiscard]] std::vector<bool> eval_contextual_signal(
    const Program& program, const ContextualSignalConfig& cfg,
    std::uint64_t seed = 0, Backend backend = Backend::lite);

namespace reference {

/// One module per signal: [GlobalAnchor(signal_k), Response_k].
[[nodiscard]] Program changing_env_solution(const ChangingEnvConfig& cfg);

/// Context-by-regulation solver. Each first signal i has a module that
/// writes +1 into the regulators of the four second-signal modules built for
/// context i; module (i, j) is tagged second_signals[j] with bit i-1 flipped
/// (context 0 unflipped) and expresses response_table[i][j]. Without
/// regulation only the context-0 modules ever win.
[[nodiscard]] Program contextual_regulation_solution(
    const ContextualSignalConfig& cfg);

/// Ignores the first signal: the module tagged second_signals[j] expresses
/// responses[j].
[[nodiscard]] Program contextual_blind_program(
    const ContextualSignalConfig& cfg,
    const std::array<std::uint8_t, 4>& responses);

}  // namespace reference

}  // namespace sgpvm
