#include "sgpvm/equivalence.hpp"

#include <bit>
#include <memory>
#include <string>

#include "sgpvm/backend.hpp"

namespace sgpvm {

NotEquivalenceSafe::NotEquivalenceSafe(std::size_t position, Opcode opcode)
    : std::invalid_argument("instruction " + std::to_string(position) + " (" +
                            std::string(opcode_name(opcode)) +
                            ") behaves differently across backends"),
      position_(position),
      opcode_(opcode) {}

EquivalenceTrace run_equivalence_trace(const Program& program, Tag signal,
                                       std::size_t cycles, std::uint64_t seed,
                                       Backend backend) {
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (!is_equivalence_safe(program[i].opcode)) {
      throw NotEquivalenceSafe(i, program[i].opcode);
    }
  }
  auto shared = std::make_shared<const Program>(program);
  return with_backend(backend, [&]<typename Cpu>() {
    EquivalenceTrace trace;
    Cpu cpu(shared, CpuConfig{}, seed);
    cpu.launch(signal);
    std::map<std::uint64_t, std::array<std::uint64_t, kRegisterCount>> last;
    cpu.step_observed(cycles, [&](std::uint64_t cycle, std::uint64_t core_id,
                                  Opcode op, std::span<const double> regs) {
      ++trace.instructions_executed;
      std::array<std::uint64_t, kRegisterCount> bits{};
      for (std::size_t r = 0; r < kRegisterCount; ++r) {
        bits[r] = std::bit_cast<std::uint64_t>(regs[r]);
      }
      auto [it, inserted] = last.try_emplace(core_id);
      if (inserted) it->second.fill(std::bit_cast<std::uint64_t>(0.0));
      if (bits != it->second) {
        trace.entries.push_back({cycle, core_id, op, bits});
        it->second = bits;
      }
    });
    trace.final_registers = std::move(last);
    trace.rng_draws = cpu.rng().draws();
    return trace;
  });
}

}  // namespace sgpvm
