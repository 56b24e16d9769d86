#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sgpvm/cpu_common.hpp"
#include "sgpvm/semantics.hpp"

namespace sgpvm {

/// Optimized interpreter: programs are pre-decoded into a dense switch over a
/// handful of dispatch classes, registers are a fixed array per core, jump
/// targets are resolved statically, and there is no call stack. A core that
/// runs off its module simply retires.
class LiteCpu {
 public:
  struct Core {
    std::array<double, kRegisterCount> registers{};
    std::uint32_t ip = 0;
    std::uint32_t end = 0;
    std::uint64_t id = 0;
    bool alive = true;
  };

  LiteCpu(std::shared_ptr<const Program> program, CpuConfig config = {},
          std::uint64_t seed = 0)
      : program_(std::move(program)),
        ops_(decode(*program_)),
        config_(config),
        rng_(seed),
        regulators_(program_->module_count(), 0.0) {
    cores_.reserve(config_.core_capacity);
  }

  /// Starts a core on the regulated best-matching module. Returns false and
  /// leaves all state untouched when every core slot is busy; returns false
  /// when no module clears the match threshold.
  bool launch(Tag signal) {
    if (cores_.size() >= config_.core_capacity) return false;
    const auto module = cache_.lookup(signal, program_->module_tags(),
                                      regulators_, config_.min_raw);
    if (!module) return false;
    const Module& m = program_->modules()[*module];
    Core& core = cores_.emplace_back();
    core.ip = m.begin;
    core.end = m.end;
    core.id = next_core_id_++;
    core.alive = m.begin < m.end;
    return true;
  }

  void step(std::size_t cycles) {
    auto ignore = [](auto&&...) {};
    run<false>(cycles, ignore);
  }

  template <typename Observer>
  void step_observed(std::size_t cycles, Observer&& observer) {
    run<true>(cycles, observer);
  }

  void kill_all_cores() { cores_.clear(); }

  void write_regulator(std::size_t module, double value) {
    regulators_[module] = semantics::finite_or_zero(value);
    cache_.invalidate();
  }

  [[nodiscard]] std::size_t active_cores() const { return cores_.size(); }
  [[nodiscard]] std::span<const double> regulators() const {
    return regulators_;
  }
  [[nodiscard]] const MatchCache& cache() const { return cache_; }
  [[nodiscard]] const Rng& rng() const { return rng_; }
  [[nodiscard]] ResponseBuffer& responses() { return responses_; }
  [[nodiscard]] const ResponseBuffer& responses() const { return responses_; }
  [[nodiscard]] const Program& program() const { return *program_; }
  [[nodiscard]] std::uint64_t cycles_elapsed() const { return cycles_; }

  [[nodiscard]] std::vector<CoreView> cores() const {
    std::vector<CoreView> out;
    out.reserve(cores_.size());
    for (const Core& c : cores_) out.push_back({c.id, c.ip, c.registers});
    return out;
  }

 private:
  // Dispatch class. Add, Subtract and Multiply share one class and select
  // their result without a branch.
  enum class Kind : std::uint8_t {
    advance,
    arith,
    divide,
    jump_if_not_zero,
    jump_if_zero,
    terminate,
    other
  };

  // Pre-decoded instruction with its static jump or regulator target.
  struct Op {
    Opcode opcode = Opcode::Nop;
    Kind kind = Kind::advance;
    std::uint8_t a = 0;
    std::uint8_t b = 0;
    std::uint8_t c = 0;
    std::uint8_t arith = 0;
    std::uint32_t target = 0;
  };

  template <bool kObserve, typename Observer>
  void run(std::size_t cycles, Observer& observer) {
    const std::uint64_t first_cycle = cycles_;
    cycles_ += cycles;
    const Op* code = ops_.data();
    // Nothing launches cores mid-step, so a lone core can run its whole
    // budget without the per-cycle scheduling pass.
    if (cores_.size() == 1) {
      Core& core = cores_.front();
      std::uint32_t ip = core.ip;
      bool alive = core.alive;
      for (std::size_t cycle = 0; cycle < cycles && alive; ++cycle) {
        const Opcode op = code[ip].opcode;
        alive = execute(core.registers, ip, core.end, code);
        if constexpr (kObserve) {
          observer(first_cycle + cycle, core.id, op,
                   std::span<const double>(core.registers));
        }
      }
      core.ip = ip;
      if (!alive) cores_.clear();
      return;
    }
    for (std::size_t cycle = 0; cycle < cycles; ++cycle) {
      if (cores_.empty()) return;
      bool any_dead = false;
      for (Core& core : cores_) {
        if (core.alive) {
          const Opcode op = code[core.ip].opcode;
          core.alive = execute(core.registers, core.ip, core.end, code);
          if constexpr (kObserve) {
            observer(first_cycle + cycle, core.id, op,
                     std::span<const double>(core.registers));
          }
        }
        any_dead |= !core.alive;
      }
      if (any_dead) {
        std::erase_if(cores_, [](const Core& c) { return !c.alive; });
      }
    }
  }

  // Runs the instruction at `ip` and advances it. Returns false when the core
  // retires.
  [[gnu::always_inline]] bool execute(std::array<double, kRegisterCount>& r,
                                      std::uint32_t& ip, std::uint32_t end,
                                      const Op* ops) {
    const Op& op = ops[ip];
    switch (op.kind) {
      case Kind::advance:
        break;
      case Kind::arith: {
        const double x = r[op.a];
        const double y = r[op.b];
        const double results[3] = {x + y, x - y, x * y};
        r[op.c] = results[op.arith];
        break;
      }
      case Kind::divide:
        r[op.c] = semantics::divide(r[op.a], r[op.b]);
        break;
      case Kind::jump_if_not_zero:
        if (r[op.a] != 0.0) {
          ip = op.target;
          return true;
        }
        break;
      case Kind::jump_if_zero:
        if (r[op.a] == 0.0) {
          ip = op.target;
          return true;
        }
        break;
      case Kind::terminate:
        return false;
      case Kind::other:
        execute_other(op, r);
        break;
    }
    return ++ip < end;
  }

  void execute_other(const Op& op, std::array<double, kRegisterCount>& r) {
    const auto a = op.a;
    const auto b = op.b;
    const auto c = op.c;
    switch (op.opcode) {
      case Opcode::And: r[c] = semantics::bit_and(r[a], r[b]); break;
      case Opcode::Or: r[c] = semantics::bit_or(r[a], r[b]); break;
      case Opcode::Not: r[c] = semantics::bit_not(r[a]); break;
      case Opcode::Xor: r[c] = semantics::bit_xor(r[a], r[b]); break;
      case Opcode::ShiftLeft: r[c] = semantics::shift_left(r[a], r[b]); break;
      case Opcode::ShiftRight: r[c] = semantics::shift_right(r[a], r[b]); break;
      case Opcode::Equal: r[c] = semantics::truth(r[a] == r[b]); break;
      case Opcode::NotEqual: r[c] = semantics::truth(r[a] != r[b]); break;
      case Opcode::LessThan: r[c] = semantics::truth(r[a] < r[b]); break;
      case Opcode::GreaterThan: r[c] = semantics::truth(r[a] > r[b]); break;
      case Opcode::RandUniform: r[a] = rng_.uniform(); break;
      case Opcode::RandBernoulli:
        r[a] = semantics::truth(rng_.bernoulli(semantics::probability(r[b])));
        break;
      case Opcode::SetRegulator: write_regulator(op.target, r[a]); break;
      case Opcode::AdjustRegulator:
        write_regulator(op.target, regulators_[op.target] + r[a]);
        break;
      case Opcode::SenseRegulator: r[a] = regulators_[op.target]; break;
      case Opcode::ClearRegulator: write_regulator(op.target, 0.0); break;
      default:
        responses_.record(response_index(op.opcode));
        break;
    }
  }

  static std::vector<Op> decode(const Program& program) {
    std::vector<Op> ops(program.size());
    for (std::size_t ip = 0; ip < program.size(); ++ip) {
      const Instruction& inst = program[ip];
      Op& op = ops[ip];
      op.opcode = inst.opcode;
      op.a = inst.operands[0];
      op.b = inst.operands[1];
      op.c = inst.operands[2];
      switch (inst.opcode) {
        case Opcode::Nop:
        case Opcode::GlobalAnchor:
        case Opcode::LocalAnchor:
          op.kind = Kind::advance;
          break;
        case Opcode::Add:
        case Opcode::Subtract:
        case Opcode::Multiply:
          op.kind = Kind::arith;
          op.arith = static_cast<std::uint8_t>(
              static_cast<int>(inst.opcode) - static_cast<int>(Opcode::Add));
          break;
        case Opcode::Divide:
          op.kind = Kind::divide;
          break;
        case Opcode::JumpIfNotZero:
        case Opcode::JumpIfZero:
          op.target = program.jump_target(ip);
          op.kind = op.target == Program::kNoTarget
                        ? Kind::advance
                        : (inst.opcode == Opcode::JumpIfNotZero
                               ? Kind::jump_if_not_zero
                               : Kind::jump_if_zero);
          break;
        case Opcode::Terminate:
          op.kind = Kind::terminate;
          break;
        default:
          op.kind = Kind::other;
          if (is_regulation(inst.opcode)) {
            op.target = program.regulator_target(ip);
          }
          break;
      }
    }
    return ops;
  }

  std::shared_ptr<const Program> program_;
  std::vector<Op> ops_;
  CpuConfig config_;
  Rng rng_;
  RegulationState regulators_;
  MatchCache cache_;
  ResponseBuffer responses_;
  std::vector<Core> cores_;
  std::uint64_t next_core_id_ = 0;
  std::uint64_t cycles_ = 0;
};

static_assert(VirtualCpu<LiteCpu>);

}  // namespace sgpvm
