#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sgpvm/cpu_common.hpp"
#include "sgpvm/program.hpp"

namespace sgpvm {

/// One register-changing instruction. Registers are compared bit-for-bit.
struct TraceEntry {
  std::uint64_t cycle = 0;
  std::uint64_t core_id = 0;
  Opcode opcode = Opcode::Nop;
  std::array<std::uint64_t, kRegisterCount> register_bits{};

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct EquivalenceTrace {
  std::vector<TraceEntry> entries;
  /// Register bits of each core after its last executed instruction.
  std::map<std::uint64_t, std::array<std::uint64_t, kRegisterCount>>
      final_registers;
  std::uint64_t rng_draws = 0;
  std::uint64_t instructions_executed = 0;

  friend bool operator==(const EquivalenceTrace&,
                         const EquivalenceTrace&) = default;
};

/// Program uses an opcode whose meaning differs between backends.
class NotEquivalenceSafe : public std::invalid_argument {
 public:
  NotEquivalenceSafe(std::size_t position, Opcode opcode);
  [[nodiscard]] std::size_t position() const { return position_; }
  [[nodiscard]] Opcode opcode() const { return opcode_; }

 private:
  std::size_t position_;
  Opcode opcode_;
};

/// Launches `signal` once on a fresh cpu of the given backend and runs it
/// for `cycles`, recording every register-changing instruction. Throws
/// NotEquivalenceSafe before executing anything if the program contains an
/// opcode outside the equivalence-safe subset.
[[nodiscard]] EquivalenceTrace run_equivalence_trace(const Program& program,
                                                     Tag signal,
                                                     std::size_t cycles,
                                                     std::uint64_t seed,
                                                     Backend backend);

}  // namespace sgpvm
