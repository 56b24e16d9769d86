#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sgpvm/evolution.hpp"

namespace sgpvm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment file contents. Text form is INI with the sections
/// [experiment], [problem], [selection] and [mutation]; see configs/.
struct ExperimentConfig {
  // [experiment]
  std::uint64_t seed = 1;
  std::size_t replicates = 10;
  std::string output_dir = "runs";
  Backend backend = Backend::lite;
  std::size_t ancestor_length = 100;
  std::size_t ancestor_modules = 0;
  std::string ancestor;  ///< genome path; empty means random ancestors

  // [problem]
  ProblemKind problem = ProblemKind::changing_env;
  std::size_t k = 2;
  std::size_t cycles_per_signal = 128;
  std::vector<Tag> signal_tags;  ///< changing_env; empty means generated
  std::vector<Tag> first_signals;   ///< contextual_signal; empty or 4
  std::vector<Tag> second_signals;  ///< contextual_signal; empty or 4
  ResponseTable response_table = default_response_table();
  bool regulation = true;
  std::size_t core_capacity = 16;
  double min_raw = 0.0;

  // [selection]
  SelectionScheme selection = SelectionScheme::elite_roulette;
  std::size_t population_size = 100;
  std::size_t generations = 1000;

  // [mutation]
  MutationConfig mutation;

  /// Range and consistency checks; throws ConfigError.
  void validate() const;

  /// Copy with every generated signal tag written out explicitly, so the
  /// result alone pins the problem instance.
  [[nodiscard]] ExperimentConfig with_resolved_tags() const;

  /// Replicate `index` as a ready-to-run evolution config. Reads the
  /// ancestor genome (relative to `base_dir`) when one is named.
  [[nodiscard]] EvolutionConfig evolution_config(
      std::size_t index, const std::filesystem::path& base_dir = {}) const;

  [[nodiscard]] std::uint64_t replicate_seed(std::size_t index) const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

/// Throws ConfigError on syntax errors, unknown keys, or bad values.
[[nodiscard]] ExperimentConfig parse_experiment_config(std::string_view text);
[[nodiscard]] ExperimentConfig load_experiment_config(
    const std::filesystem::path& path);
/// Canonical text; parse_experiment_config(serialize(c)) == c.
[[nodiscard]] std::string serialize_experiment_config(
    const ExperimentConfig& cfg);

}  // namespace sgpvm
