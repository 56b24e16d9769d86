#include "sgpvm/program.hpp"

#include <stdexcept>
#include <string>

#include "sgpvm/tag_match.hpp"

namespace sgpvm {

std::vector<std::pair<std::size_t, Tag>> extract_modules(
    std::span<const Instruction> instructions) {
  std::vector<std::pair<std::size_t, Tag>> out;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (instructions[i].opcode == Opcode::GlobalAnchor) {
      out.emplace_back(i, instructions[i].tag);
    }
  }
  if (out.empty()) out.emplace_back(0, Tag{});
  return out;
}

namespace {

std::uint32_t resolve_jump(std::span<const Instruction> code,
                           std::size_t ip, const Module& m) {
  const Tag query = code[ip].tag;
  std::uint32_t best = Program::kNoTarget;
  unsigned best_distance = kTagWidth + 1;
  const std::size_t span = m.end - m.begin;
  for (std::size_t step = 1; step <= span; ++step) {
    const std::size_t pos = m.begin + (ip - m.begin + step) % span;
    if (code[pos].opcode != Opcode::LocalAnchor) continue;
    const unsigned d = hamming_distance(query, code[pos].tag);
    if (d < best_distance) {
      best = static_cast<std::uint32_t>(pos);
      best_distance = d;
    }
  }
  return best;
}

}  // namespace

Program::Program(std::vector<Instruction> instructions)
    : instructions_(std::move(instructions)) {
  for (std::size_t i = 0; i < instructions_.size(); ++i) {
    for (auto operand : instructions_[i].operands) {
      if (operand >= kRegisterCount) {
        throw std::invalid_argument("instruction " + std::to_string(i) +
                                    ": operand index " +
                                    std::to_string(operand) +
                                    " out of range");
      }
    }
  }
  const auto starts = extract_modules(instructions_);
  const auto n = static_cast<std::uint32_t>(instructions_.size());
  modules_.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto begin = static_cast<std::uint32_t>(starts[i].first);
    const auto end = i + 1 < starts.size()
                         ? static_cast<std::uint32_t>(starts[i + 1].first)
                         : n;
    modules_.push_back({begin, end, starts[i].second});
    module_tags_.push_back(starts[i].second);
  }

  jump_targets_.assign(instructions_.size(), kNoTarget);
  regulator_targets_.assign(instructions_.size(), 0);
  for (std::size_t ip = 0; ip < instructions_.size(); ++ip) {
    if (is_regulation(instructions_[ip].opcode)) {
      regulator_targets_[ip] = static_cast<std::uint32_t>(
          best_raw_match(instructions_[ip].tag, module_tags_).value_or(0));
    }
  }
  for (const Module& m : modules_) {
    for (std::size_t ip = m.begin; ip < m.end; ++ip) {
      const Opcode op = instructions_[ip].opcode;
      if (op == Opcode::JumpIfNotZero || op == Opcode::JumpIfZero) {
        jump_targets_[ip] = resolve_jump(instructions_, ip, m);
      }
    }
  }
}

Instruction random_instruction(const InstructionSet& set, Rng& rng) {
  if (set.empty()) {
    throw std::invalid_argument("cannot draw from empty instruction set '" +
                                set.name() + "'");
  }
  Instruction inst;
  inst.opcode = set.opcodes()[rng.below(set.size())];
  for (auto& operand : inst.operands) {
    operand = static_cast<std::uint8_t>(rng.below(kRegisterCount));
  }
  inst.tag = Tag{rng.next()};
  return inst;
}

Program random_program(const InstructionSet& set, std::size_t length,
                       Rng& rng) {
  if (set.empty() && length > 0) {
    throw std::invalid_argument("cannot draw from empty instruction set '" +
                                set.name() + "'");
  }
  std::vector<Instruction> code;
  code.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    code.push_back(random_instruction(set, rng));
  }
  return Program(std::move(code));
}

}  // namespace sgpvm
