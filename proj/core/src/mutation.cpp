#include "sgpvm/mutation.hpp"

#include <stdexcept>
#include <string>

namespace sgpvm {
namespace {

void check_rate(double rate, const char* field) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument(std::string("mutation.") + field +
                                " must be in [0, 1]");
  }
}

}  // namespace

void MutationConfig::validate() const {
  check_rate(tag_bit_flip_rate, "tag_bit_flip_rate");
  check_rate(opcode_sub_rate, "opcode_sub_rate");
  check_rate(operand_sub_rate, "operand_sub_rate");
  check_rate(insertion_rate, "insertion_rate");
  check_rate(deletion_rate, "deletion_rate");
  if (max_length < 1) {
    throw std::invalid_argument("mutation.max_length must be >= 1");
  }
}

Program mutate(const Program& program, const MutationConfig& cfg,
               const InstructionSet& set, Rng& rng) {
  std::vector<Instruction> code(program.instructions().begin(),
                                program.instructions().end());

  if (cfg.tag_bit_flip_rate > 0.0) {
    for (Instruction& inst : code) {
      for (std::size_t bit = 0; bit < kTagWidth; ++bit) {
        if (rng.bernoulli(cfg.tag_bit_flip_rate)) {
          inst.tag.bits ^= std::uint64_t{1} << bit;
        }
      }
    }
  }
  if (cfg.opcode_sub_rate > 0.0) {
    for (Instruction& inst : code) {
      if (rng.bernoulli(cfg.opcode_sub_rate)) {
        inst.opcode = set.opcodes()[rng.below(set.size())];
      }
    }
  }
  if (cfg.operand_sub_rate > 0.0) {
    for (Instruction& inst : code) {
      if (rng.bernoulli(cfg.operand_sub_rate)) {
        const auto slot = rng.below(inst.operands.size());
        inst.operands[slot] =
            static_cast<std::uint8_t>(rng.below(kRegisterCount));
      }
    }
  }
  if (cfg.insertion_rate > 0.0) {
    std::vector<Instruction> grown;
    grown.reserve(code.size() + 8);
    std::size_t length = code.size();
    for (const Instruction& inst : code) {
      if (rng.bernoulli(cfg.insertion_rate) && length < cfg.max_length) {
        grown.push_back(random_instruction(set, rng));
        ++length;
      }
      grown.push_back(inst);
    }
    code = std::move(grown);
  }
  if (cfg.deletion_rate > 0.0) {
    std::vector<Instruction> kept;
    kept.reserve(code.size());
    std::size_t remaining = code.size();
    for (const Instruction& inst : code) {
      if (rng.bernoulli(cfg.deletion_rate) && remaining > 1) {
        --remaining;
        continue;
      }
      kept.push_back(inst);
    }
    code = std::move(kept);
  }
  if (code.size() > cfg.max_length) code.resize(cfg.max_length);
  if (code.empty()) code.push_back(random_instruction(set, rng));
  return Program(std::move(code));
}

}  // namespace sgpvm
