#include "sgpvm/evolution.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "sgpvm/selection.hpp"

namespace sgpvm {
namespace {

// Stream identifiers for derive_seed paths.
constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kEvalStream = 0xE7A1;
constexpr std::uint64_t kSelectStream = 0x5E1E;
constexpr std::uint64_t kMutateStream = 0x3D7A;

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

std::string_view problem_name(ProblemKind p) {
  return p == ProblemKind::changing_env ? "changing_env" : "contextual_signal";
}

ProblemKind problem_from_name(std::string_view name) {
  if (name == "changing_env") return ProblemKind::changing_env;
  if (name == "contextual_signal") return ProblemKind::contextual_signal;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::string_view selection_name(SelectionScheme s) {
  return s == SelectionScheme::elite_roulette ? "elite_roulette" : "lexicase";
}

SelectionScheme selection_from_name(std::string_view name) {
  if (name == "elite_roulette") return SelectionScheme::elite_roulette;
  if (name == "lexicase") return SelectionScheme::lexicase;
  throw std::invalid_argument("unknown selection scheme '" + std::string(name) +
                              "'");
}

InstructionSet EvolutionConfig::instruction_set() const {
  return problem == ProblemKind::changing_env
             ? changing_env.instruction_set()
             : contextual_signal.instruction_set();
}

std::size_t EvolutionConfig::case_count() const {
  return problem == ProblemKind::changing_env
             ? changing_env.k()
             : ContextualSignalConfig::kCases;
}

void EvolutionConfig::validate() const {
  if (problem == ProblemKind::changing_env) {
    changing_env.validate();
  } else {
    contextual_signal.validate();
  }
  if (population_size < 1) {
    throw std::invalid_argument("selection.population_size must be >= 1");
  }
  if (ancestor_length < 1) {
    throw std::invalid_argument("experiment.ancestor_length must be >= 1");
  }
  if (ancestor_modules > ancestor_length) {
    throw std::invalid_argument(
        "experiment.ancestor_modules exceeds ancestor_length");
  }
  mutation.validate();
  if (ancestor) {
    const auto set = instruction_set();
    for (const Instruction& inst : ancestor->instructions()) {
      if (!set.contains(inst.opcode)) {
        throw std::invalid_argument("ancestor uses opcode " +
                                    std::string(opcode_name(inst.opcode)) +
                                    " outside set " + set.name());
      }
    }
  }
}

Program random_ancestor(const InstructionSet& set, std::size_t length,
                        std::size_t modules, Rng& rng) {
  Program base = random_program(set, length, rng);
  std::vector<Instruction> code(base.instructions().begin(),
                                base.instructions().end());
  modules = std::min(modules, length);
  if (modules > 0) {
    std::vector<std::size_t> positions(length > 0 ? length - 1 : 0);
    std::iota(positions.begin(), positions.end(), std::size_t{1});
    for (std::size_t i = 0; i + 1 < modules; ++i) {
      std::swap(positions[i], positions[i + rng.below(positions.size() - i)]);
    }
    code[0].opcode = Opcode::GlobalAnchor;
    for (std::size_t i = 0; i + 1 < modules; ++i) {
      code[positions[i]].opcode = Opcode::GlobalAnchor;
    }
  }
  return Program(std::move(code));
}

std::vector<double> evaluate_cases(const EvolutionConfig& cfg,
                                   const Program& program,
                                   std::uint64_t eval_seed) {
  const auto passed =
      cfg.problem == ProblemKind::changing_env
          ? eval_changing_environment_cases(program, cfg.changing_env,
                                            eval_seed, cfg.backend)
          : eval_contextual_signal(program, cfg.contextual_signal, eval_seed,
                                   cfg.backend);
  return std::vector<double>(passed.begin(), passed.end());
}

EvolutionResult run_evolution(const EvolutionConfig& cfg) {
  cfg.validate();
  const InstructionSet set = cfg.instruction_set();
  const std::size_t n = cfg.population_size;
  const double perfect = static_cast<double>(cfg.case_count());
  const std::size_t modules =
      cfg.ancestor_modules > 0
          ? cfg.ancestor_modules
          : (cfg.problem == ProblemKind::changing_env
                 ? cfg.changing_env.k()
                 : 2 * ContextualSignalConfig::kSignals);

  EvolutionResult result;
  auto& population = result.population;
  population.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.ancestor) {
      population.push_back(*cfg.ancestor);
    } else {
      Rng rng(derive_seed(cfg.seed, {kInitStream, i}));
      population.push_back(
          random_ancestor(set, cfg.ancestor_length, modules, rng));
    }
  }

  CaseScores scores(n);
  auto& fitness = result.fitnesses;
  for (std::size_t gen = 0;; ++gen) {
    fitness.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = evaluate_cases(
          cfg, population[i], derive_seed(cfg.seed, {kEvalStream, gen, i}));
      fitness[i] = std::accumulate(scores[i].begin(), scores[i].end(), 0.0);
    }
    const double best = *std::max_element(fitness.begin(), fitness.end());
    const double mean =
        std::accumulate(fitness.begin(), fitness.end(), 0.0) /
        static_cast<double>(n);
    const bool solved = best >= perfect;
    result.history.push_back({gen, best, mean, solved});
    if (solved) {
      result.solved_at = gen;
      break;
    }
    if (gen >= cfg.generations) break;

    Rng select_rng(derive_seed(cfg.seed, {kSelectStream, gen}));
    std::vector<std::size_t> parents;
    parents.reserve(n);
    if (cfg.selection == SelectionScheme::elite_roulette) {
      parents.push_back(elite_select(fitness));
      while (parents.size() < n) {
        parents.push_back(roulette_select(fitness, select_rng));
      }
    } else {
      while (parents.size() < n) {
        parents.push_back(lexicase_select(scores, select_rng));
      }
    }

    std::vector<Program> next;
    next.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Program& parent = population[parents[i]];
      if (i == 0 && cfg.selection == SelectionScheme::elite_roulette) {
        next.push_back(parent);
        continue;
      }
      Rng mutate_rng(derive_seed(cfg.seed, {kMutateStream, gen, i}));
      next.push_back(mutate(parent, cfg.mutation, set, mutate_rng));
    }
    population = std::move(next);
  }
  return result;
}

std::string history_csv(const std::vector<GenerationRecord>& history) {
  std::string out = "generation,max_fitness,mean_fitness,solved\n";
  for (const auto& rec : history) {
    out += std::to_string(rec.generation);
    out += ',';
    out += format_number(rec.max_fitness);
    out += ',';
    out += format_number(rec.mean_fitness);
    out += ',';
    out += rec.solved ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace sgpvm
