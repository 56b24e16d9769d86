#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sgpvm/instruction_set.hpp"
#include "sgpvm/program.hpp"

namespace sgpvm {

/// Malformed genome text. `line()` is 1-based.
class GenomeParseError : public std::runtime_error {
 public:
  GenomeParseError(std::size_t line, const std::string& what)
      : std::runtime_error("genome line " + std::to_string(line) + ": " + what),
        line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Genome {
  InstructionSet set;
  Program program;
};

// Text format:
//   sgpvm-genome v1 set=<set-name> regs=<R>
//   <opcode> <op0> <op1> <op2> <tag-hex>      (one line per instruction)
[[nodiscard]] std::string serialize_genome(const Program& program,
                                           const InstructionSet& set);
[[nodiscard]] Genome parse_genome(std::string_view text);

void write_genome(const std::filesystem::path& path, const Program& program,
                  const InstructionSet& set);
[[nodiscard]] Genome read_genome(const std::filesystem::path& path);

}  // namespace sgpvm
