#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace sgpvm {

inline constexpr std::size_t kMaxResponses = 16;

enum class Opcode : std::uint8_t {
  Nop,
  GlobalAnchor,
  LocalAnchor,
  JumpIfNotZero,
  JumpIfZero,
  Terminate,
  Add,
  Subtract,
  Multiply,
  Divide,
  And,
  Or,
  Not,
  Xor,
  ShiftLeft,
  ShiftRight,
  Equal,
  NotEqual,
  LessThan,
  GreaterThan,
  RandUniform,
  RandBernoulli,
  SetRegulator,
  AdjustRegulator,
  SenseRegulator,
  ClearRegulator,
  Response0,
  // Response1 .. Response15 follow contiguously.
  ResponseLast = Response0 + kMaxResponses - 1,
};

inline constexpr std::size_t kOpcodeCount =
    static_cast<std::size_t>(Opcode::ResponseLast) + 1;

[[nodiscard]] constexpr Opcode response_opcode(std::size_t k) {
  return static_cast<Opcode>(static_cast<std::size_t>(Opcode::Response0) + k);
}

[[nodiscard]] constexpr bool is_response(Opcode op) {
  return op >= Opcode::Response0 && op <= Opcode::ResponseLast;
}

[[nodiscard]] constexpr std::size_t response_index(Opcode op) {
  return static_cast<std::size_t>(op) -
         static_cast<std::size_t>(Opcode::Response0);
}

[[nodiscard]] constexpr bool is_regulator_write(Opcode op) {
  return op == Opcode::SetRegulator || op == Opcode::AdjustRegulator ||
         op == Opcode::ClearRegulator;
}

[[nodiscard]] constexpr bool is_regulation(Opcode op) {
  return is_regulator_write(op) || op == Opcode::SenseRegulator;
}

[[nodiscard]] constexpr bool is_rng(Opcode op) {
  return op == Opcode::RandUniform || op == Opcode::RandBernoulli;
}

/// Opcodes whose meaning is identical under both backends: everything except
/// control flow, randomness, regulation and responses.
[[nodiscard]] constexpr bool is_equivalence_safe(Opcode op) {
  switch (op) {
    case Opcode::Nop:
    case Opcode::Add:
    case Opcode::Subtract:
    case Opcode::Multiply:
    case Opcode::Divide:
    case Opcode::And:
    case Opcode::Or:
    case Opcode::Not:
    case Opcode::Xor:
    case Opcode::ShiftLeft:
    case Opcode::ShiftRight:
    case Opcode::Equal:
    case Opcode::NotEqual:
    case Opcode::LessThan:
    case Opcode::GreaterThan:
      return true;
    default:
      return false;
  }
}

/// Canonical spelling used in genome files ("Add", "Response_3", ...).
[[nodiscard]] std::string_view opcode_name(Opcode op);
[[nodiscard]] std::optional<Opcode> opcode_from_name(std::string_view name);

}  // namespace sgpvm
