#include "sgpvm/experiment_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sgpvm/genome_io.hpp"

namespace sgpvm {
namespace {

namespace pt = boost::property_tree;

constexpr std::uint64_t kTagStream = 0x7A65;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string join_tags(const std::vector<Tag>& tags) {
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i > 0) out += ',';
    out += to_hex(tags[i]);
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    out.push_back(first == std::string::npos
                      ? std::string()
                      : item.substr(first, last - first + 1));
  }
  return out;
}

// Typed reader over one ptree section that remembers which keys it consumed
// so leftovers can be reported as unknown.
class Section {
 public:
  Section(const pt::ptree& root, std::string name) : name_(std::move(name)) {
    if (auto child = root.get_child_optional(name_)) tree_ = *child;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const auto raw = tree_.get_optional<std::string>(key);
    seen_.insert(key);
    if (!raw) return;
    try {
      out = convert<T>(*raw);
    } catch (const std::exception& e) {
      throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
    }
  }

  void reject_unknown() const {
    for (const auto& [key, value] : tree_) {
      if (!seen_.contains(key)) {
        throw ConfigError("[" + name_ + "] unknown key '" + key + "'");
      }
    }
  }

 private:
  template <typename T>
  static T convert(const std::string& s) {
    if constexpr (std::is_same_v<T, std::string>) {
      return s;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (s == "true") return true;
      if (s == "false") return false;
      throw std::invalid_argument("expected true or false, got '" + s + "'");
    } else if constexpr (std::is_arithmetic_v<T>) {
      T v{};
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad number '" + s + "'");
      }
      return v;
    } else if constexpr (std::is_same_v<T, Backend>) {
      return backend_from_name(s);
    } else if constexpr (std::is_same_v<T, ProblemKind>) {
      return problem_from_name(s);
    } else if constexpr (std::is_same_v<T, SelectionScheme>) {
      return selection_from_name(s);
    } else if constexpr (std::is_same_v<T, std::vector<Tag>>) {
      std::vector<Tag> tags;
      if (s.empty()) return tags;
      for (const auto& item : split_list(s)) tags.push_back(tag_from_hex(item));
      return tags;
    } else {
      static_assert(std::is_same_v<T, ResponseTable>);
      const auto items = split_list(s);
      if (items.size() != 16) {
        throw std::invalid_argument("response_table needs 16 entries");
      }
      ResponseTable table{};
      for (std::size_t i = 0; i < 16; ++i) {
        table[i / 4][i % 4] = static_cast<std::uint8_t>(convert<unsigned>(items[i]));
      }
      return table;
    }
  }

  std::string name_;
  pt::ptree tree_;
  std::set<std::string> seen_;
};

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (problem == ProblemKind::changing_env) {
    if (k != 2 && k != 4 && k != 8 && k != 16) {
      fail("[problem] k must be 2, 4, 8 or 16");
    }
    if (!signal_tags.empty() && signal_tags.size() != k) {
      fail("[problem] signal_tags must list exactly k tags");
    }
  } else {
    if (!first_signals.empty() && first_signals.size() != 4) {
      fail("[problem] first_signals must list 4 tags");
    }
    if (!second_signals.empty() && second_signals.size() != 4) {
      fail("[problem] second_signals must list 4 tags");
    }
    if (first_signals.empty() != second_signals.empty()) {
      fail("[problem] give both first_signals and second_signals or neither");
    }
  }
  if (cycles_per_signal == 0) fail("[problem] cycles_per_signal must be > 0");
  if (core_capacity == 0) fail("[problem] core_capacity must be > 0");
  if (!(min_raw >= 0.0 && min_raw <= 1.0)) {
    fail("[problem] min_raw must be in [0, 1]");
  }
  if (population_size == 0) fail("[selection] population_size must be > 0");
  if (ancestor_length == 0) fail("[experiment] ancestor_length must be > 0");
  if (ancestor_modules > ancestor_length) {
    fail("[experiment] ancestor_modules exceeds ancestor_length");
  }
  try {
    mutation.validate();
    const auto evo = with_resolved_tags();
    if (evo.problem == ProblemKind::changing_env) {
      ChangingEnvConfig ce;
      ce.signal_tags = evo.signal_tags;
      ce.validate();
    } else {
      ContextualSignalConfig cs;
      std::copy_n(evo.first_signals.begin(), 4, cs.first_signals.begin());
      std::copy_n(evo.second_signals.begin(), 4, cs.second_signals.begin());
      cs.response_table = response_table;
      cs.validate();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig ExperimentConfig::with_resolved_tags() const {
  ExperimentConfig out = *this;
  Rng rng(derive_seed(seed, {kTagStream}));
  if (problem == ProblemKind::changing_env) {
    if (out.signal_tags.empty()) {
      out.signal_tags = ChangingEnvConfig::generate(k, rng).signal_tags;
    }
  } else if (out.first_signals.empty()) {
    const auto cs = ContextualSignalConfig::generate(rng);
    out.first_signals.assign(cs.first_signals.begin(), cs.first_signals.end());
    out.second_signals.assign(cs.second_signals.begin(),
                              cs.second_signals.end());
  }
  return out;
}

std::uint64_t ExperimentConfig::replicate_seed(std::size_t index) const {
  return derive_seed(seed, {index});
}

EvolutionConfig ExperimentConfig::evolution_config(
    std::size_t index, const std::filesystem::path& base_dir) const {
  const ExperimentConfig resolved = with_resolved_tags();
  CpuConfig cpu;
  cpu.core_capacity = core_capacity;
  cpu.min_raw = min_raw;

  EvolutionConfig evo;
  evo.problem = problem;
  evo.changing_env.signal_tags = resolved.signal_tags;
  evo.changing_env.cycles_per_signal = cycles_per_signal;
  evo.changing_env.cpu = cpu;
  if (problem == ProblemKind::contextual_signal) {
    auto& cs = evo.contextual_signal;
    std::copy_n(resolved.first_signals.begin(), 4, cs.first_signals.begin());
    std::copy_n(resolved.second_signals.begin(), 4, cs.second_signals.begin());
    cs.response_table = response_table;
    cs.cycles_per_signal = cycles_per_signal;
    cs.regulation = regulation;
    cs.cpu = cpu;
  }
  evo.population_size = population_size;
  evo.generations = generations;
  evo.selection = selection;
  evo.mutation = mutation;
  evo.ancestor_length = ancestor_length;
  evo.ancestor_modules = ancestor_modules;
  evo.backend = backend;
  evo.seed = replicate_seed(index);
  if (!ancestor.empty()) {
    std::filesystem::path path(ancestor);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    evo.ancestor = read_genome(path).program;
  }
  return evo;
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  static const std::set<std::string> kSections = {"experiment", "problem",
                                                  "selection", "mutation"};
  for (const auto& [name, child] : root) {
    if (!kSections.contains(name)) {
      throw ConfigError("unknown section [" + name + "]");
    }
  }

  ExperimentConfig cfg;
  Section experiment(root, "experiment");
  experiment.read("seed", cfg.seed);
  experiment.read("replicates", cfg.replicates);
  experiment.read("output_dir", cfg.output_dir);
  experiment.read("backend", cfg.backend);
  experiment.read("ancestor_length", cfg.ancestor_length);
  experiment.read("ancestor_modules", cfg.ancestor_modules);
  experiment.read("ancestor", cfg.ancestor);
  experiment.reject_unknown();

  Section problem(root, "problem");
  problem.read("name", cfg.problem);
  problem.read("k", cfg.k);
  problem.read("cycles_per_signal", cfg.cycles_per_signal);
  problem.read("signal_tags", cfg.signal_tags);
  problem.read("first_signals", cfg.first_signals);
  problem.read("second_signals", cfg.second_signals);
  problem.read("response_table", cfg.response_table);
  problem.read("regulation", cfg.regulation);
  problem.read("core_capacity", cfg.core_capacity);
  problem.read("min_raw", cfg.min_raw);
  problem.reject_unknown();

  Section selection(root, "selection");
  selection.read("scheme", cfg.selection);
  selection.read("population_size", cfg.population_size);
  selection.read("generations", cfg.generations);
  selection.reject_unknown();

  Section mutation(root, "mutation");
  mutation.read("tag_bit_flip_rate", cfg.mutation.tag_bit_flip_rate);
  mutation.read("opcode_sub_rate", cfg.mutation.opcode_sub_rate);
  mutation.read("operand_sub_rate", cfg.mutation.operand_sub_rate);
  mutation.read("insertion_rate", cfg.mutation.insertion_rate);
  mutation.read("deletion_rate", cfg.mutation.deletion_rate);
  mutation.read("max_length", cfg.mutation.max_length);
  mutation.reject_unknown();

  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string serialize_experiment_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[experiment]\n"
      << "seed = " << cfg.seed << '\n'
      << "replicates = " << cfg.replicates << '\n'
      << "output_dir = " << cfg.output_dir << '\n'
      << "backend = " << backend_name(cfg.backend) << '\n'
      << "ancestor_length = " << cfg.ancestor_length << '\n'
      << "ancestor_modules = " << cfg.ancestor_modules << '\n';
  if (!cfg.ancestor.empty()) out << "ancestor = " << cfg.ancestor << '\n';

  out << "\n[problem]\n"
      << "name = " << problem_name(cfg.problem) << '\n'
      << "k = " << cfg.k << '\n'
      << "cycles_per_signal = " << cfg.cycles_per_signal << '\n';
  if (!cfg.signal_tags.empty()) {
    out << "signal_tags = " << join_tags(cfg.signal_tags) << '\n';
  }
  if (!cfg.first_signals.empty()) {
    out << "first_signals = " << join_tags(cfg.first_signals) << '\n';
  }
  if (!cfg.second_signals.empty()) {
    out << "second_signals = " << join_tags(cfg.second_signals) << '\n';
  }
  out << "response_table = ";
  for (std::size_t i = 0; i < 16; ++i) {
    out << (i > 0 ? "," : "") << int{cfg.response_table[i / 4][i % 4]};
  }
  out << '\n'
      << "regulation = " << (cfg.regulation ? "true" : "false") << '\n'
      << "core_capacity = " << cfg.core_capacity << '\n'
      << "min_raw = " << format_double(cfg.min_raw) << '\n';

  out << "\n[selection]\n"
      << "scheme = " << selection_name(cfg.selection) << '\n'
      << "population_size = " << cfg.population_size << '\n'
      << "generations = " << cfg.generations << '\n';

  const auto& m = cfg.mutation;
  out << "\n[mutation]\n"
      << "tag_bit_flip_rate = " << format_double(m.tag_bit_flip_rate) << '\n'
      << "opcode_sub_rate = " << format_double(m.opcode_sub_rate) << '\n'
      << "operand_sub_rate = " << format_double(m.operand_sub_rate) << '\n'
      << "insertion_rate = " << format_double(m.insertion_rate) << '\n'
      << "deletion_rate = " << format_double(m.deletion_rate) << '\n'
      << "max_length = " << m.max_length << '\n';
  return out.str();
}

}  // namespace sgpvm
