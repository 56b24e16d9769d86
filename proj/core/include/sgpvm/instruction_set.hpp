#pragma once

#include <bitset>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgpvm/opcode.hpp"

namespace sgpvm {

/// Named, frozen list of opcodes. Programs are generated against one set and
/// genome files record its name.
///
/// Registered names:
///   nop, arithmetic, complete, sans_regulation   -- microbenchmark sets
///   changing_env_k<K>                            -- complete + Response_0..K-1
///   contextual_signal                            -- complete - RNG + 4 responses
///   contextual_signal_sans_regulation            -- the above minus regulation
class InstructionSet {
 public:
  InstructionSet(std::string name, std::vector<Opcode> opcodes);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::span<const Opcode> opcodes() const { return opcodes_; }
  [[nodiscard]] std::size_t size() const { return opcodes_.size(); }
  [[nodiscard]] bool empty() const { return opcodes_.empty(); }
  [[nodiscard]] bool contains(Opcode op) const {
    return members_.test(static_cast<std::size_t>(op));
  }

  /// Copy of this set without the opcodes matching `pred`.
  template <typename Pred>
  [[nodiscard]] InstructionSet without(std::string new_name, Pred pred) const {
    std::vector<Opcode> kept;
    for (Opcode op : opcodes_) {
      if (!pred(op)) kept.push_back(op);
    }
    return {std::move(new_name), std::move(kept)};
  }

  friend bool operator==(const InstructionSet& a, const InstructionSet& b) {
    return a.name_ == b.name_ && a.opcodes_ == b.opcodes_;
  }

 private:
  std::string name_;
  std::vector<Opcode> opcodes_;
  std::bitset<kOpcodeCount> members_;
};

namespace sets {

[[nodiscard]] InstructionSet nop();
[[nodiscard]] InstructionSet arithmetic();
[[nodiscard]] InstructionSet complete();
[[nodiscard]] InstructionSet sans_regulation();
[[nodiscard]] InstructionSet changing_env(std::size_t k);
[[nodiscard]] InstructionSet contextual_signal(bool regulation = true);
/// The equivalence-safe subset used for cross-backend verification.
[[nodiscard]] InstructionSet equivalence_safe();

}  // namespace sets

/// Resolves any registered name; throws std::invalid_argument when unknown.
[[nodiscard]] InstructionSet instruction_set_by_name(std::string_view name);

/// The four microbenchmark set names, in table order.
[[nodiscard]] std::span<const std::string_view> benchmark_set_names();

}  // namespace sgpvm
