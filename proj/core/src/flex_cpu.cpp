#include "sgpvm/flex_cpu.hpp"

#include <stdexcept>

#include "sgpvm/semantics.hpp"

namespace sgpvm {
namespace {

using Handler = FlexInstructionLibrary::Handler;

double& reg(FlexCore& core, std::uint8_t index) {
  return core.registers.at(index);
}

Handler binary(double (*fn)(double, double)) {
  return [fn](FlexCpu&, FlexCore& core, const Instruction& inst) {
    reg(core, inst.operands[2]) =
        fn(reg(core, inst.operands[0]), reg(core, inst.operands[1]));
  };
}

bool is_block_opener(Opcode op) {
  return op == Opcode::JumpIfNotZero || op == Opcode::JumpIfZero;
}

// Position just past the LocalAnchor matching the opener at `opener`, or the
// module end when the block is never closed.
std::size_t skip_block(const Program& program, const FlexCore& core,
                       std::size_t opener) {
  std::size_t depth = 0;
  for (std::size_t pos = opener + 1; pos < core.module_end; ++pos) {
    const Opcode op = program[pos].opcode;
    if (is_block_opener(op)) {
      ++depth;
    } else if (op == Opcode::LocalAnchor) {
      if (depth == 0) return pos + 1;
      --depth;
    }
  }
  return core.module_end;
}

Handler block_opener(FlexBlock::Kind kind, bool (*condition)(double)) {
  return [kind, condition](FlexCpu& cpu, FlexCore& core,
                           const Instruction& inst) {
    const std::size_t opener = core.ip - 1;
    if (condition(reg(core, inst.operands[0]))) {
      core.blocks.push_back({kind, opener});
    } else {
      core.ip = skip_block(cpu.program(), core, opener);
    }
  };
}

}  // namespace

void FlexInstructionLibrary::add(Opcode op, std::string name,
                                 Handler handler) {
  const auto index = static_cast<std::size_t>(op);
  if (handlers_.size() <= index) {
    handlers_.resize(index + 1);
    names_.resize(index + 1);
  }
  handlers_[index] = std::move(handler);
  names_[index] = std::move(name);
}

const Handler& FlexInstructionLibrary::handler(Opcode op) const {
  return handlers_.at(static_cast<std::size_t>(op));
}

const std::string& FlexInstructionLibrary::name(Opcode op) const {
  return names_.at(static_cast<std::size_t>(op));
}

std::shared_ptr<const FlexInstructionLibrary>
FlexInstructionLibrary::standard() {
  static const auto library = [] {
    auto lib = std::make_shared<FlexInstructionLibrary>();
    const Handler nothing = [](FlexCpu&, FlexCore&, const Instruction&) {};
    lib->add(Opcode::Nop, "Nop", nothing);
    lib->add(Opcode::GlobalAnchor, "GlobalAnchor", nothing);

    lib->add(Opcode::JumpIfNotZero, "JumpIfNotZero",
             block_opener(FlexBlock::Kind::if_block,
                          [](double v) { return v != 0.0; }));
    lib->add(Opcode::JumpIfZero, "JumpIfZero",
             block_opener(FlexBlock::Kind::while_block,
                          [](double v) { return v != 0.0; }));
    lib->add(Opcode::LocalAnchor, "LocalAnchor",
             [](FlexCpu&, FlexCore& core, const Instruction&) {
               if (core.blocks.empty()) return;
               const FlexBlock block = core.blocks.back();
               core.blocks.pop_back();
               if (block.kind == FlexBlock::Kind::while_block) {
                 core.ip = block.opener;
               }
             });
    lib->add(Opcode::Terminate, "Terminate",
             [](FlexCpu&, FlexCore& core, const Instruction&) {
               core.alive = false;
             });

    lib->add(Opcode::Add, "Add",
             binary([](double a, double b) { return a + b; }));
    lib->add(Opcode::Subtract, "Subtract",
             binary([](double a, double b) { return a - b; }));
    lib->add(Opcode::Multiply, "Multiply",
             binary([](double a, double b) { return a * b; }));
    lib->add(Opcode::Divide, "Divide", binary(semantics::divide));
    lib->add(Opcode::And, "And", binary(semantics::bit_and));
    lib->add(Opcode::Or, "Or", binary(semantics::bit_or));
    lib->add(Opcode::Xor, "Xor", binary(semantics::bit_xor));
    lib->add(Opcode::Not, "Not",
             [](FlexCpu&, FlexCore& core, const Instruction& inst) {
               reg(core, inst.operands[2]) =
                   semantics::bit_not(reg(core, inst.operands[0]));
             });
    lib->add(Opcode::ShiftLeft, "ShiftLeft", binary(semantics::shift_left));
    lib->add(Opcode::ShiftRight, "ShiftRight", binary(semantics::shift_right));
    lib->add(Opcode::Equal, "Equal", binary([](double a, double b) {
               return semantics::truth(a == b);
             }));
    lib->add(Opcode::NotEqual, "NotEqual", binary([](double a, double b) {
               return semantics::truth(a != b);
             }));
    lib->add(Opcode::LessThan, "LessThan", binary([](double a, double b) {
               return semantics::truth(a < b);
             }));
    lib->add(Opcode::GreaterThan, "GreaterThan",
             binary([](double a, double b) { return semantics::truth(a > b); }));

    lib->add(Opcode::RandUniform, "RandUniform",
             [](FlexCpu& cpu, FlexCore& core, const Instruction& inst) {
               reg(core, inst.operands[0]) = cpu.mutable_rng().uniform();
             });
    lib->add(Opcode::RandBernoulli, "RandBernoulli",
             [](FlexCpu& cpu, FlexCore& core, const Instruction& inst) {
               const double p =
                   semantics::probability(reg(core, inst.operands[1]));
               reg(core, inst.operands[0]) =
                   semantics::truth(cpu.mutable_rng().bernoulli(p));
             });

    lib->add(Opcode::SetRegulator, "SetRegulator",
             [](FlexCpu& cpu, FlexCore& core, const Instruction& inst) {
               cpu.write_regulator(cpu.regulator_index(inst.tag),
                                   reg(core, inst.operands[0]));
             });
    lib->add(Opcode::AdjustRegulator, "AdjustRegulator",
             [](FlexCpu& cpu, FlexCore& core, const Instruction& inst) {
               const auto m = cpu.regulator_index(inst.tag);
               cpu.write_regulator(m, cpu.regulator(m) +
                                          reg(core, inst.operands[0]));
             });
    lib->add(Opcode::SenseRegulator, "SenseRegulator",
             [](FlexCpu& cpu, FlexCore& core, const Instruction& inst) {
               reg(core, inst.operands[0]) =
                   cpu.regulator(cpu.regulator_index(inst.tag));
             });
    lib->add(Opcode::ClearRegulator, "ClearRegulator",
             [](FlexCpu& cpu, FlexCore&, const Instruction& inst) {
               cpu.write_regulator(cpu.regulator_index(inst.tag), 0.0);
             });

    for (std::size_t k = 0; k < kMaxResponses; ++k) {
      const Opcode op = response_opcode(k);
      lib->add(op, std::string(opcode_name(op)),
               [k](FlexCpu& cpu, FlexCore&, const Instruction&) {
                 cpu.responses().record(k);
               });
    }
    return std::shared_ptr<const FlexInstructionLibrary>(std::move(lib));
  }();
  return library;
}

FlexCpu::FlexCpu(std::shared_ptr<const Program> program, CpuConfig config,
                 std::uint64_t seed,
                 std::shared_ptr<const FlexInstructionLibrary> library)
    : program_(std::move(program)),
      library_(std::move(library)),
      config_(config),
      rng_(seed),
      regulators_(program_->module_count(), 0.0) {
  if (config_.register_count < kRegisterCount) {
    throw std::invalid_argument("flex backend needs at least " +
                                std::to_string(kRegisterCount) +
                                " registers");
  }
}

bool FlexCpu::launch(Tag signal) {
  if (cores_.size() >= config_.core_capacity) return false;
  const auto module = cache_.lookup(signal, program_->module_tags(),
                                    regulators_, config_.min_raw);
  if (!module) return false;
  const Module& m = program_->modules()[*module];
  FlexCore core;
  core.registers.assign(config_.register_count, 0.0);
  core.ip = m.begin;
  core.module_begin = m.begin;
  core.module_end = m.end;
  core.id = next_core_id_++;
  core.alive = m.begin < m.end;
  cores_.push_back(std::move(core));
  return true;
}

void FlexCpu::step(std::size_t cycles) { run(cycles, nullptr); }

void FlexCpu::write_regulator(std::size_t module, double value) {
  regulators_.at(module) = semantics::finite_or_zero(value);
  cache_.invalidate();
}

std::size_t FlexCpu::regulator_index(Tag tag) const {
  return best_raw_match(tag, program_->module_tags()).value_or(0);
}

std::vector<CoreView> FlexCpu::cores() const {
  std::vector<CoreView> out;
  for (const FlexCore& c : cores_) out.push_back({c.id, c.ip, c.registers});
  return out;
}

void FlexCpu::close_blocks_at_module_end(FlexCore& core) const {
  while (core.ip >= core.module_end && !core.blocks.empty()) {
    const FlexBlock block = core.blocks.back();
    core.blocks.pop_back();
    if (block.kind == FlexBlock::Kind::while_block) core.ip = block.opener;
  }
}

void FlexCpu::run(std::size_t cycles,
                  const std::function<StepObserverSignature>* observer) {
  for (std::size_t cycle = 0; cycle < cycles; ++cycle, ++cycles_) {
    for (FlexCore& core : cores_) {
      if (!core.alive) continue;
      const Instruction& inst = (*program_)[core.ip];
      ++core.ip;
      library_->handler(inst.opcode)(*this, core, inst);
      if (observer != nullptr) {
        (*observer)(cycles_, core.id, inst.opcode, core.registers);
      }
      if (!core.alive) continue;
      close_blocks_at_module_end(core);
      if (core.ip >= core.module_end) core.alive = false;
    }
    std::erase_if(cores_, [](const FlexCore& c) { return !c.alive; });
  }
}

}  // namespace sgpvm
