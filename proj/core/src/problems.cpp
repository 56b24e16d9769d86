#include "sgpvm/problems.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sgpvm/backend.hpp"

namespace sgpvm {
namespace {

std::vector<Tag> distinct_tags(std::size_t count, Rng& rng) {
  std::vector<Tag> tags;
  while (tags.size() < count) {
    const Tag t{rng.next()};
    if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(t);
  }
  return tags;
}

bool all_distinct(std::vector<Tag> tags) {
  std::sort(tags.begin(), tags.end(),
            [](Tag a, Tag b) { return a.bits < b.bits; });
  return std::adjacent_find(tags.begin(), tags.end()) == tags.end();
}

Instruction anchor(Tag tag) {
  return Instruction{Opcode::GlobalAnchor, {}, tag};
}

Instruction respond(std::size_t k) {
  return Instruction{response_opcode(k), {}, Tag{}};
}

}  // namespace

void ChangingEnvConfig::validate() const {
  const std::size_t n = k();
  if (n != 2 && n != 4 && n != 8 && n != 16) {
    throw std::invalid_argument("changing_env: K must be 2, 4, 8 or 16 (got " +
                                std::to_string(n) + ")");
  }
  if (!all_distinct(signal_tags)) {
    throw std::invalid_argument("changing_env: signal tags must be distinct");
  }
  if (cycles_per_signal == 0) {
    throw std::invalid_argument("changing_env: cycles_per_signal must be > 0");
  }
}

ChangingEnvConfig ChangingEnvConfig::generate(std::size_t k, Rng& rng) {
  ChangingEnvConfig cfg;
  cfg.signal_tags = distinct_tags(k, rng);
  return cfg;
}

ResponseTable default_response_table() {
  ResponseTable table{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      table[i][j] = static_cast<std::uint8_t>((i + j) % 4);
    }
  }
  return table;
}

void ContextualSignalConfig::validate() const {
  std::vector<Tag> all(first_signals.begin(), first_signals.end());
  all.insert(all.end(), second_signals.begin(), second_signals.end());
  if (!all_distinct(all)) {
    throw std::invalid_argument(
        "contextual_signal: all eight signal tags must be distinct");
  }
  for (const auto& row : response_table) {
    for (auto r : row) {
      if (r >= kSignals) {
        throw std::invalid_argument(
            "contextual_signal: response table entries must be in [0, 4)");
      }
    }
  }
  if (cycles_per_signal == 0) {
    throw std::invalid_argument(
        "contextual_signal: cycles_per_signal must be > 0");
  }
}

ContextualSignalConfig ContextualSignalConfig::generate(Rng& rng) {
  ContextualSignalConfig cfg;
  const auto tags = distinct_tags(2 * kSignals, rng);
  std::copy_n(tags.begin(), kSignals, cfg.first_signals.begin());
  std::copy_n(tags.begin() + kSignals, kSignals, cfg.second_signals.begin());
  return cfg;
}

std::vector<bool> eval_changing_environment_cases(const Program& program,
                                                  const ChangingEnvConfig& cfg,
                                                  std::uint64_t seed,
                                                  Backend backend) {
  const auto shared = std::make_shared<const Program>(program);
  return with_backend(backend, [&]<typename Cpu>() {
    Rng order_rng(derive_seed(seed, {0}));
    std::vector<std::size_t> order(cfg.k());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[order_rng.below(i)]);
    }
    Cpu cpu(shared, cfg.cpu, derive_seed(seed, {1}));
    std::vector<bool> passed(cfg.k(), false);
    for (std::size_t k : order) {
      cpu.responses().reset();
      cpu.launch(cfg.signal_tags[k]);
      cpu.step(cfg.cycles_per_signal);
      passed[k] = cpu.responses().last_response == k;
    }
    return passed;
  });
}

double eval_changing_environment(const Program& program,
                                 const ChangingEnvConfig& cfg,
                                 std::uint64_t seed, Backend backend) {
  const auto passed =
      eval_changing_environment_cases(program, cfg, seed, backend);
  return static_cast<double>(std::count(passed.begin(), passed.end(), true));
}

std::vector<bool> eval_contextual_signal(const Program& program,
                                         const ContextualSignalConfig& cfg,
                                         std::uint64_t seed, Backend backend) {
  constexpr std::size_t n = ContextualSignalConfig::kSignals;
  const auto shared = std::make_shared<const Program>(program);
  return with_backend(backend, [&]<typename Cpu>() {
    std::vector<bool> passed(ContextualSignalConfig::kCases, false);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Cpu cpu(shared, cfg.cpu, derive_seed(seed, {i * n + j}));
        cpu.launch(cfg.first_signals[i]);
        cpu.step(cfg.cycles_per_signal);
        cpu.kill_all_cores();
        cpu.responses().reset();
        cpu.launch(cfg.second_signals[j]);
        cpu.step(cfg.cycles_per_signal);
        passed[i * n + j] =
            cpu.responses().last_response == cfg.response_table[i][j];
      }
    }
    return passed;
  });
}

namespace reference {

Program changing_env_solution(const ChangingEnvConfig& cfg) {
  std::vector<Instruction> code;
  for (std::size_t k = 0; k < cfg.k(); ++k) {
    code.push_back(anchor(cfg.signal_tags[k]));
    code.push_back(respond(k));
  }
  return Program(std::move(code));
}

Program contextual_regulation_solution(const ContextualSignalConfig& cfg) {
  constexpr std::size_t n = ContextualSignalConfig::kSignals;
  auto context_tag = [&](std::size_t i, std::size_t j) {
    const std::uint64_t mask = i == 0 ? 0 : std::uint64_t{1} << (i - 1);
    return Tag{cfg.second_signals[j].bits ^ mask};
  };
  std::vector<Instruction> code;
  for (std::size_t i = 0; i < n; ++i) {
    code.push_back(anchor(cfg.first_signals[i]));
    // r1 := (r0 == r0) = 1.0
    code.push_back(Instruction{Opcode::Equal, {0, 0, 1}, Tag{}});
    for (std::size_t j = 0; j < n; ++j) {
      code.push_back(
          Instruction{Opcode::AdjustRegulator, {1, 0, 0}, context_tag(i, j)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      code.push_back(anchor(context_tag(i, j)));
      code.push_back(respond(cfg.response_table[i][j]));
    }
  }
  return Program(std::move(code));
}

Program contextual_blind_program(const ContextualSignalConfig& cfg,
                                 const std::array<std::uint8_t, 4>& responses) {
  std::vector<Instruction> code;
  for (std::size_t j = 0; j < ContextualSignalConfig::kSignals; ++j) {
    code.push_back(anchor(cfg.second_signals[j]));
    code.push_back(respond(responses[j]));
  }
  return Program(std::move(code));
}

}  // namespace reference

}  // namespace sgpvm
