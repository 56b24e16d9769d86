#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sgpvm/cpu_common.hpp"

namespace sgpvm {

class FlexCpu;

/// Reference interpreter modelled on the flexible design: every opcode is a
/// dynamically bound handler looked up in an instruction library, registers
/// are a runtime-sized vector, and control flow uses nested blocks kept on a
/// per-core block stack.
///
/// Block dialect (flex only):
///   JumpIfNotZero  opens an if-block; body runs when reg[a] != 0
///   JumpIfZero     opens a while-block; body repeats while reg[a] != 0
///   LocalAnchor    closes the innermost open block (no-op if none)
/// A skipped block resumes after its matching LocalAnchor, or at module end.
/// Reaching module end closes open blocks innermost-first.
struct FlexBlock {
  enum class Kind : std::uint8_t { if_block, while_block };
  Kind kind;
  std::size_t opener;
};

struct FlexCore {
  std::vector<double> registers;
  std::vector<FlexBlock> blocks;
  std::size_t ip = 0;
  std::size_t module_begin = 0;
  std::size_t module_end = 0;
  std::uint64_t id = 0;
  bool alive = true;
};

class FlexInstructionLibrary {
 public:
  using Handler = std::function<void(FlexCpu&, FlexCore&, const Instruction&)>;

  void add(Opcode op, std::string name, Handler handler);
  [[nodiscard]] const Handler& handler(Opcode op) const;
  [[nodiscard]] const std::string& name(Opcode op) const;

  /// Library with a handler for every opcode.
  [[nodiscard]] static std::shared_ptr<const FlexInstructionLibrary> standard();

 private:
  std::vector<Handler> handlers_;
  std::vector<std::string> names_;
};

class FlexCpu {
 public:
  FlexCpu(std::shared_ptr<const Program> program, CpuConfig config = {},
          std::uint64_t seed = 0,
          std::shared_ptr<const FlexInstructionLibrary> library =
              FlexInstructionLibrary::standard());

  bool launch(Tag signal);

  void step(std::size_t cycles);

  template <typename Observer>
  void step_observed(std::size_t cycles, Observer&& observer) {
    const std::function<StepObserverSignature> fn = observer;
    run(cycles, &fn);
  }

  void kill_all_cores() { cores_.clear(); }

  void write_regulator(std::size_t module, double value);

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
  [[nodiscard]] std::vector<CoreView> cores() const;

  // Handler-facing state.
  [[nodiscard]] Rng& mutable_rng() { return rng_; }
  [[nodiscard]] double regulator(std::size_t module) const {
    return regulators_.at(module);
  }
  /// Regulator addressed by a tag: best raw match over module tags.
  [[nodiscard]] std::size_t regulator_index(Tag tag) const;

 private:
  void run(std::size_t cycles,
           const std::function<StepObserverSignature>* observer);
  void close_blocks_at_module_end(FlexCore& core) const;

  std::shared_ptr<const Program> program_;
  std::shared_ptr<const FlexInstructionLibrary> library_;
  CpuConfig config_;
  Rng rng_;
  RegulationState regulators_;
  MatchCache cache_;
  ResponseBuffer responses_;
  std::deque<FlexCore> cores_;
  std::uint64_t next_core_id_ = 0;
  std::uint64_t cycles_ = 0;
};

static_assert(VirtualCpu<FlexCpu>);

}  // namespace sgpvm
