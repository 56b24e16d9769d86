#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgpvm/cpu_common.hpp"
#include "sgpvm/mutation.hpp"
#include "sgpvm/problems.hpp"
#include "sgpvm/program.hpp"

namespace sgpvm {

enum class ProblemKind { changing_env, contextual_signal };
enum class SelectionScheme { elite_roulette, lexicase };

[[nodiscard]] std::string_view problem_name(ProblemKind p);
[[nodiscard]] ProblemKind problem_from_name(std::string_view name);
[[nodiscard]] std::string_view selection_name(SelectionScheme s);
[[nodiscard]] SelectionScheme selection_from_name(std::string_view name);

/// Everything one replicate needs. Problem tags are fixed by the caller so a
/// run manifest can pin them.
struct EvolutionConfig {
  ProblemKind problem = ProblemKind::changing_env;
  ChangingEnvConfig changing_env;
  ContextualSignalConfig contextual_signal;
  std::size_t population_size = 100;
  std::size_t generations = 1000;  ///< cap; generation 0 is always evaluated
  SelectionScheme selection = SelectionScheme::elite_roulette;
  MutationConfig mutation;
  std::size_t ancestor_length = 100;
  /// GlobalAnchors placed in each random ancestor; 0 means one per signal.
  std::size_t ancestor_modules = 0;
  /// When set, the population starts as copies of this program.
  std::optional<Program> ancestor;
  Backend backend = Backend::lite;
  std::uint64_t seed = 0;

  [[nodiscard]] InstructionSet instruction_set() const;
  [[nodiscard]] std::size_t case_count() const;
  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double max_fitness = 0.0;
  double mean_fitness = 0.0;
  bool solved = false;

  friend bool operator==(const GenerationRecord&,
                         const GenerationRecord&) = default;
};

struct EvolutionResult {
  std::vector<GenerationRecord> history;
  std::vector<Program> population;
  std::vector<double> fitnesses;
  std::optional<std::size_t> solved_at;
};

/// Random ancestor: `length` instructions from `set` with `modules`
/// GlobalAnchors at distinct random positions, the first at position 0.
[[nodiscard]] Program random_ancestor(const InstructionSet& set,
                                      std::size_t length, std::size_t modules,
                                      Rng& rng);

/// Per-case pass/fail scores of one individual (signals or signal pairs).
[[nodiscard]] std::vector<double> evaluate_cases(const EvolutionConfig& cfg,
                                                 const Program& program,
                                                 std::uint64_t eval_seed);

/// Generational loop: evaluate, record, halt on the first perfect
/// individual, otherwise select parents, mutate offspring and replace.
/// elite_roulette keeps one unmutated elite plus N-1 mutated roulette
/// picks; lexicase fills all N slots with mutated lexicase picks.
[[nodiscard]] EvolutionResult run_evolution(const EvolutionConfig& cfg);

/// `generation,max_fitness,mean_fitness,solved`
[[nodiscard]] std::string history_csv(
    const std::vector<GenerationRecord>& history);

}  // namespace sgpvm
