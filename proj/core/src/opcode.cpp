#include "sgpvm/opcode.hpp"

#include <array>
#include <string>

namespace sgpvm {
namespace {

constexpr std::array<std::string_view, 26> kBaseNames = {
    "Nop",          "GlobalAnchor",    "LocalAnchor",    "JumpIfNotZero",
    "JumpIfZero",   "Terminate",       "Add",            "Subtract",
    "Multiply",     "Divide",          "And",            "Or",
    "Not",          "Xor",             "ShiftLeft",      "ShiftRight",
    "Equal",        "NotEqual",        "LessThan",       "GreaterThan",
    "RandUniform",  "RandBernoulli",   "SetRegulator",   "AdjustRegulator",
    "SenseRegulator", "ClearRegulator",
};
static_assert(kBaseNames.size() == static_cast<std::size_t>(Opcode::Response0));

constexpr std::array<std::string_view, kMaxResponses> kResponseNames = {
    "Response_0",  "Response_1",  "Response_2",  "Response_3",
    "Response_4",  "Response_5",  "Response_6",  "Response_7",
    "Response_8",  "Response_9",  "Response_10", "Response_11",
    "Response_12", "Response_13", "Response_14", "Response_15",
};

}  // namespace

std::string_view opcode_name(Opcode op) {
  if (is_response(op)) return kResponseNames[response_index(op)];
  return kBaseNames[static_cast<std::size_t>(op)];
}

std::optional<Opcode> opcode_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kOpcodeCount; ++i) {
    const auto op = static_cast<Opcode>(i);
    if (opcode_name(op) == name) return op;
  }
  return std::nullopt;
}

}  // namespace sgpvm
