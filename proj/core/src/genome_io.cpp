#include "sgpvm/genome_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace sgpvm {
namespace {

constexpr std::string_view kMagic = "sgpvm-genome";
constexpr std::string_view kVersion = "v1";

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string serialize_genome(const Program& program,
                             const InstructionSet& set) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << " set=" << set.name()
      << " regs=" << kRegisterCount << '\n';
  for (const Instruction& inst : program.instructions()) {
    out << opcode_name(inst.opcode) << ' ' << int{inst.operands[0]} << ' '
        << int{inst.operands[1]} << ' ' << int{inst.operands[2]} << ' '
        << to_hex(inst.tag) << '\n';
  }
  return out.str();
}

Genome parse_genome(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw GenomeParseError(1, "missing header");
  const auto header = split_ws(line);
  if (header.size() != 4 || header[0] != kMagic || header[1] != kVersion ||
      !header[2].starts_with("set=") || !header[3].starts_with("regs=")) {
    throw GenomeParseError(
        1, "expected 'sgpvm-genome v1 set=<name> regs=<R>'");
  }
  std::optional<InstructionSet> set;
  try {
    set = instruction_set_by_name(header[2].substr(4));
  } catch (const std::invalid_argument& e) {
    throw GenomeParseError(1, e.what());
  }
  std::size_t regs = 0;
  if (!parse_uint(header[3].substr(5), regs) || regs != kRegisterCount) {
    throw GenomeParseError(1, "unsupported register count '" +
                                  std::string(header[3].substr(5)) + "'");
  }

  std::vector<Instruction> code;
  while (next_line(line)) {
    const auto fields = split_ws(line);
    if (fields.empty()) throw GenomeParseError(line_no, "blank line");
    if (fields.size() != 5) {
      throw GenomeParseError(line_no, "expected 5 fields, got " +
                                          std::to_string(fields.size()));
    }
    Instruction inst;
    const auto op = opcode_from_name(fields[0]);
    if (!op) {
      throw GenomeParseError(line_no,
                             "unknown opcode '" + std::string(fields[0]) + "'");
    }
    if (!set->contains(*op)) {
      throw GenomeParseError(line_no, "opcode '" + std::string(fields[0]) +
                                          "' not in set '" + set->name() +
                                          "'");
    }
    inst.opcode = *op;
    for (std::size_t k = 0; k < 3; ++k) {
      unsigned v = 0;
      if (!parse_uint(fields[1 + k], v) || v >= kRegisterCount) {
        throw GenomeParseError(line_no, "bad operand '" +
                                            std::string(fields[1 + k]) + "'");
      }
      inst.operands[k] = static_cast<std::uint8_t>(v);
    }
    try {
      inst.tag = tag_from_hex(fields[4]);
    } catch (const std::invalid_argument& e) {
      throw GenomeParseError(line_no, e.what());
    }
    code.push_back(inst);
  }
  return Genome{std::move(*set), Program(std::move(code))};
}

void write_genome(const std::filesystem::path& path, const Program& program,
                  const InstructionSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_genome(program, set);
}

Genome read_genome(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_genome(buf.str());
}

}  // namespace sgpvm
