#include "sgpvm/instruction_set.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace sgpvm {

InstructionSet::InstructionSet(std::string name, std::vector<Opcode> opcodes)
    : name_(std::move(name)), opcodes_(std::move(opcodes)) {
  for (Opcode op : opcodes_) {
    const auto bit = static_cast<std::size_t>(op);
    if (members_.test(bit)) {
      throw std::invalid_argument("instruction set '" + name_ +
                                  "' lists an opcode twice: " +
                                  std::string(opcode_name(op)));
    }
    members_.set(bit);
  }
}

namespace sets {

InstructionSet nop() { return {"nop", {Opcode::Nop}}; }

InstructionSet arithmetic() {
  return {"arithmetic",
          {Opcode::Add, Opcode::Subtract, Opcode::Multiply, Opcode::Divide}};
}

InstructionSet complete() {
  return {"complete",
          {Opcode::Add,           Opcode::Subtract,       Opcode::Multiply,
           Opcode::Divide,        Opcode::Nop,            Opcode::GlobalAnchor,
           Opcode::LocalAnchor,   Opcode::JumpIfNotZero,  Opcode::JumpIfZero,
           Opcode::Terminate,     Opcode::And,            Opcode::Or,
           Opcode::Not,           Opcode::Xor,            Opcode::ShiftLeft,
           Opcode::ShiftRight,    Opcode::Equal,          Opcode::NotEqual,
           Opcode::LessThan,      Opcode::GreaterThan,    Opcode::RandUniform,
           Opcode::RandBernoulli, Opcode::SetRegulator,   Opcode::AdjustRegulator,
           Opcode::SenseRegulator, Opcode::ClearRegulator}};
}

InstructionSet sans_regulation() {
  return complete().without("sans_regulation",
                            [](Opcode op) { return is_regulation(op); });
}

InstructionSet changing_env(std::size_t k) {
  if (k == 0 || k > kMaxResponses) {
    throw std::invalid_argument("changing_env: K must be in [1, 16]");
  }
  auto base = complete();
  std::vector<Opcode> ops(base.opcodes().begin(), base.opcodes().end());
  for (std::size_t i = 0; i < k; ++i) ops.push_back(response_opcode(i));
  return {"changing_env_k" + std::to_string(k), std::move(ops)};
}

InstructionSet contextual_signal(bool regulation) {
  auto base = complete().without("", [regulation](Opcode op) {
    return is_rng(op) || (!regulation && is_regulation(op));
  });
  std::vector<Opcode> ops(base.opcodes().begin(), base.opcodes().end());
  for (std::size_t i = 0; i < 4; ++i) ops.push_back(response_opcode(i));
  return {regulation ? "contextual_signal"
                     : "contextual_signal_sans_regulation",
          std::move(ops)};
}

InstructionSet equivalence_safe() {
  return complete().without("equivalence_safe", [](Opcode op) {
    return !is_equivalence_safe(op);
  });
}

}  // namespace sets

InstructionSet instruction_set_by_name(std::string_view name) {
  if (name == "nop") return sets::nop();
  if (name == "arithmetic") return sets::arithmetic();
  if (name == "complete") return sets::complete();
  if (name == "sans_regulation") return sets::sans_regulation();
  if (name == "equivalence_safe") return sets::equivalence_safe();
  if (name == "contextual_signal") return sets::contextual_signal(true);
  if (name == "contextual_signal_sans_regulation") {
    return sets::contextual_signal(false);
  }
  constexpr std::string_view kPrefix = "changing_env_k";
  if (name.starts_with(kPrefix)) {
    const auto digits = name.substr(kPrefix.size());
    std::size_t k = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && k >= 1 &&
        k <= kMaxResponses && std::to_string(k) == digits) {
      return sets::changing_env(k);
    }
  }
  throw std::invalid_argument("unknown instruction set '" + std::string(name) +
                              "'");
}

std::span<const std::string_view> benchmark_set_names() {
  static constexpr std::array<std::string_view, 4> kNames = {
      "nop", "arithmetic", "complete", "sans_regulation"};
  return kNames;
}

}  // namespace sgpvm
