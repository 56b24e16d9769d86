#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sgpvm/instruction_set.hpp"
#include "sgpvm/opcode.hpp"
#include "sgpvm/rng.hpp"
#include "sgpvm/tag.hpp"

namespace sgpvm {

/// Register-file size. Operand indices are always < kRegisterCount.
inline constexpr std::size_t kRegisterCount = 8;

struct Instruction {
  Opcode opcode = Opcode::Nop;
  std::array<std::uint8_t, 3> operands{};
  Tag tag;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// A contiguous span [begin, end) triggered by signals that match `tag`.
struct Module {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  Tag tag;

  friend bool operator==(const Module&, const Module&) = default;
};

/// (start index, tag) of every module, in order. Modules begin at
/// GlobalAnchor instructions; an anchor-free sequence is one zero-tagged
/// module starting at 0.
[[nodiscard]] std::vector<std::pair<std::size_t, Tag>> extract_modules(
    std::span<const Instruction> instructions);

/// Immutable linear program plus its derived module table.
class Program {
 public:
  static constexpr std::uint32_t kNoTarget = UINT32_MAX;

  Program() : Program(std::vector<Instruction>{}) {}
  /// Throws std::invalid_argument if any operand index is out of range.
  explicit Program(std::vector<Instruction> instructions);

  [[nodiscard]] std::span<const Instruction> instructions() const {
    return instructions_;
  }
  [[nodiscard]] std::size_t size() const { return instructions_.size(); }
  [[nodiscard]] bool empty() const { return instructions_.empty(); }
  [[nodiscard]] const Instruction& operator[](std::size_t i) const {
    return instructions_[i];
  }

  [[nodiscard]] std::span<const Module> modules() const { return modules_; }
  [[nodiscard]] std::span<const Tag> module_tags() const { return module_tags_; }
  [[nodiscard]] std::size_t module_count() const { return modules_.size(); }

  /// Resolved LocalAnchor position for the jump at `ip`, or kNoTarget.
  /// Resolution is static: best raw tag match among the LocalAnchors of the
  /// enclosing module, searching forward from ip + 1 and wrapping to the
  /// module start; the first best-scoring anchor in that order wins.
  [[nodiscard]] std::uint32_t jump_target(std::size_t ip) const {
    return jump_targets_[ip];
  }

  /// Module written by the regulation instruction at `ip`: best raw match
  /// of the instruction's tag against the module tags.
  [[nodiscard]] std::uint32_t regulator_target(std::size_t ip) const {
    return regulator_targets_[ip];
  }

  friend bool operator==(const Program& a, const Program& b) {
    return a.instructions_ == b.instructions_;
  }

 private:
  std::vector<Instruction> instructions_;
  std::vector<Module> modules_;
  std::vector<Tag> module_tags_;
  std::vector<std::uint32_t> jump_targets_;
  std::vector<std::uint32_t> regulator_targets_;
};

/// Opcode uniform over `set`, three operands uniform over [0, R), tag bits
/// uniform; draws happen in that order per instruction. Throws
/// std::invalid_argument for an empty set with length > 0.
[[nodiscard]] Instruction random_instruction(const InstructionSet& set,
                                             Rng& rng);
[[nodiscard]] Program random_program(const InstructionSet& set,
                                     std::size_t length, Rng& rng);

}  // namespace sgpvm
