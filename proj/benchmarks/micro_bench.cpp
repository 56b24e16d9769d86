#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "sgpvm/flex_cpu.hpp"
#include "sgpvm/lite_cpu.hpp"
#include "sgpvm/problems.hpp"

namespace {

using namespace sgpvm;

// Single-module program drawn from `set_name`, GlobalAnchor excluded.
std::shared_ptr<const Program> workload_program(const char* set_name,
                                                std::uint64_t seed) {
  const auto base = instruction_set_by_name(set_name);
  const auto set = base.without(
      base.name(), [](Opcode op) { return op == Opcode::GlobalAnchor; });
  Rng rng(seed);
  return std::make_shared<const Program>(random_program(set, 100, rng));
}

// One pass per iteration: launch a core on every agent, run 100 cycles,
// kill the cores.
template <typename Cpu>
void BM_Pass(benchmark::State& state, const char* set_name) {
  const auto agents = static_cast<std::size_t>(state.range(0));
  std::vector<Cpu> cpus;
  cpus.reserve(agents);
  for (std::size_t i = 0; i < agents; ++i) {
    cpus.emplace_back(workload_program(set_name, derive_seed(1, {i})),
                      CpuConfig{}, i);
  }
  for (auto _ : state) {
    for (Cpu& cpu : cpus) {
      cpu.launch(Tag{});
      cpu.step(100);
      cpu.kill_all_cores();
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(agents));
}

void agent_counts(benchmark::internal::Benchmark* b) {
  for (int n : {1, 32, 1024}) b->Arg(n);
}

void BM_Lite(benchmark::State& state, const char* set_name) {
  BM_Pass<LiteCpu>(state, set_name);
}
void BM_Flex(benchmark::State& state, const char* set_name) {
  BM_Pass<FlexCpu>(state, set_name);
}

BENCHMARK_CAPTURE(BM_Lite, nop, "nop")->Apply(agent_counts);
BENCHMARK_CAPTURE(BM_Flex, nop, "nop")->Apply(agent_counts);
BENCHMARK_CAPTURE(BM_Lite, arithmetic, "arithmetic")->Apply(agent_counts);
BENCHMARK_CAPTURE(BM_Flex, arithmetic, "arithmetic")->Apply(agent_counts);
BENCHMARK_CAPTURE(BM_Lite, complete, "complete")->Apply(agent_counts);
BENCHMARK_CAPTURE(BM_Flex, complete, "complete")->Apply(agent_counts);
BENCHMARK_CAPTURE(BM_Lite, sans_regulation, "sans_regulation")
    ->Apply(agent_counts);
BENCHMARK_CAPTURE(BM_Flex, sans_regulation, "sans_regulation")
    ->Apply(agent_counts);

void BM_BestMatch(benchmark::State& state) {
  Rng rng(2);
  std::vector<Tag> tags(static_cast<std::size_t>(state.range(0)));
  for (Tag& t : tags) t = Tag{rng.next()};
  const std::vector<double> regs(tags.size(), 0.0);
  Tag query{rng.next()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_match(query, tags, regs));
    query.bits += 1;
  }
}
BENCHMARK(BM_BestMatch)->Arg(4)->Arg(16)->Arg(64);

void BM_CacheHit(benchmark::State& state) {
  Rng rng(3);
  std::vector<Tag> tags(16);
  for (Tag& t : tags) t = Tag{rng.next()};
  const std::vector<double> regs(tags.size(), 0.0);
  MatchCache cache;
  const Tag query{rng.next()};
  (void)cache.lookup(query, tags, regs, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cache.lookup(query, tags, regs, 0.0));
  }
}
BENCHMARK(BM_CacheHit);

void BM_ContextualEvaluation(benchmark::State& state) {
  Rng rng(4);
  const auto cfg = ContextualSignalConfig::generate(rng);
  const Program p = reference::contextual_regulation_solution(cfg);
  const auto backend = state.range(0) == 0 ? Backend::lite : Backend::flex;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_contextual_signal(p, cfg, 0, backend));
  }
  state.SetLabel(backend == Backend::lite ? "lite" : "flex");
}
BENCHMARK(BM_ContextualEvaluation)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
