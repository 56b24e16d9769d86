#pragma once

#include "sgpvm/instruction_set.hpp"
#include "sgpvm/program.hpp"
#include "sgpvm/rng.hpp"

namespace sgpvm {

struct MutationConfig {
  double tag_bit_flip_rate = 0.002;  ///< per tag bit
  double opcode_sub_rate = 0.005;    ///< per instruction
  double operand_sub_rate = 0.005;   ///< per instruction
  double insertion_rate = 0.005;     ///< per site
  double deletion_rate = 0.005;      ///< per site
  std::size_t max_length = 256;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  friend bool operator==(const MutationConfig&, const MutationConfig&) = default;
};

/// Applies, in order: per-bit tag flips, per-instruction opcode resampling,
/// per-instruction resampling of one operand, per-site insertion of a random
/// instruction, per-site deletion. Insertions stop at max_length and
/// deletions never empty the program.
[[nodiscard]] Program mutate(const Program& program, const MutationConfig& cfg,
                             const InstructionSet& set, Rng& rng);

}  // namespace sgpvm
