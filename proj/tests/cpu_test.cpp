#include <gtest/gtest.h>

#include <bit>

#include "sgpvm/equivalence.hpp"
#include "sgpvm/flex_cpu.hpp"
#include "sgpvm/instruction_set.hpp"
#include "sgpvm/lite_cpu.hpp"

namespace sgpvm {
namespace {

Instruction make(Opcode op, std::uint8_t a = 0, std::uint8_t b = 0,
                 std::uint8_t c = 0, std::uint64_t tag = 0) {
  return Instruction{op, {a, b, c}, Tag{tag}};
}

using Registers = std::array<double, kRegisterCount>;

struct Capture {
  std::map<std::uint64_t, Registers> last;
  std::vector<std::pair<std::uint64_t, Opcode>> executed;
};

template <typename Cpu>
Capture run_observed(Cpu& cpu, std::size_t cycles) {
  Capture cap;
  cpu.step_observed(cycles, [&](std::uint64_t, std::uint64_t id, Opcode op,
                                std::span<const double> regs) {
    Registers r{};
    std::copy_n(regs.begin(), kRegisterCount, r.begin());
    cap.last[id] = r;
    cap.executed.emplace_back(id, op);
  });
  return cap;
}

template <typename Cpu>
Cpu make_cpu(std::vector<Instruction> code, CpuConfig cfg = {},
             std::uint64_t seed = 0) {
  return Cpu(std::make_shared<const Program>(std::move(code)), cfg, seed);
}

// Builds 1 in r1, 2 in r2, 3 in r3 from all-zero registers.
std::vector<Instruction> small_constants() {
  return {make(Opcode::Equal, 0, 0, 1), make(Opcode::Add, 1, 1, 2),
          make(Opcode::Add, 2, 1, 3)};
}

template <typename Cpu>
class CpuSemantics : public ::testing::Test {};
using Backends = ::testing::Types<LiteCpu, FlexCpu>;
TYPED_TEST_SUITE(CpuSemantics, Backends);

TYPED_TEST(CpuSemantics, AddTwoAndThreeIsFive) {
  auto code = small_constants();
  code.push_back(make(Opcode::Add, 2, 3, 4));
  auto cpu = make_cpu<TypeParam>(code);
  ASSERT_TRUE(cpu.launch(Tag{}));
  const auto cap = run_observed(cpu, 10);
  EXPECT_EQ(cap.last.at(0)[4], 5.0);
  EXPECT_EQ(cpu.active_cores(), 0U);
}

TYPED_TEST(CpuSemantics, DivideByZeroYieldsZero) {
  auto code = small_constants();
  code.push_back(make(Opcode::Divide, 3, 2, 5));
  code.push_back(make(Opcode::Divide, 3, 0, 6));
  auto cpu = make_cpu<TypeParam>(code);
  cpu.launch(Tag{});
  const auto regs = run_observed(cpu, 10).last.at(0);
  EXPECT_EQ(regs[5], 1.5);
  EXPECT_EQ(regs[6], 0.0);
}

TYPED_TEST(CpuSemantics, BitwiseAndComparisonFamilies) {
  auto code = small_constants();
  code.push_back(make(Opcode::Not, 0, 0, 4));         // ~0 = -1
  code.push_back(make(Opcode::ShiftLeft, 3, 3, 5));   // 3 << 3 = 24
  code.push_back(make(Opcode::ShiftRight, 4, 1, 6));  // -1 >> 1 = -1
  code.push_back(make(Opcode::Xor, 5, 3, 7));         // 24 ^ 3 = 27
  code.push_back(make(Opcode::LessThan, 4, 0, 0));    // -1 < 0
  auto cpu = make_cpu<TypeParam>(code);
  cpu.launch(Tag{});
  const auto regs = run_observed(cpu, 20).last.at(0);
  EXPECT_EQ(regs[4], -1.0);
  EXPECT_EQ(regs[5], 24.0);
  EXPECT_EQ(regs[6], -1.0);
  EXPECT_EQ(regs[7], 27.0);
  EXPECT_EQ(regs[0], 1.0);
}

TYPED_TEST(CpuSemantics, HundredNopsChangeNothing) {
  std::vector<Instruction> code(100, make(Opcode::Nop));
  auto cpu = make_cpu<TypeParam>(code, {}, 17);
  const Rng before = cpu.rng();
  ASSERT_TRUE(cpu.launch(Tag{}));
  const auto cap = run_observed(cpu, 100);
  EXPECT_EQ(cap.executed.size(), 100U);
  EXPECT_EQ(cap.last.at(0), Registers{});
  EXPECT_EQ(cpu.rng(), before);
  EXPECT_EQ(cpu.active_cores(), 0U);
  EXPECT_EQ(cpu.cache().generation(), 0U);
}

TYPED_TEST(CpuSemantics, StepZeroChangesNothing) {
  auto cpu = make_cpu<TypeParam>(small_constants());
  cpu.launch(Tag{});
  cpu.step(0);
  ASSERT_EQ(cpu.cores().size(), 1U);
  EXPECT_EQ(cpu.cores()[0].ip, 0U);
  EXPECT_EQ(cpu.cycles_elapsed(), 0U);
}

TYPED_TEST(CpuSemantics, LaunchStartsAtModuleStartWithZeroRegisters) {
  auto cpu = make_cpu<TypeParam>({make(Opcode::GlobalAnchor, 0, 0, 0, 0xAA),
                                  make(Opcode::Nop),
                                  make(Opcode::GlobalAnchor, 0, 0, 0, 0x55),
                                  make(Opcode::Nop)});
  ASSERT_TRUE(cpu.launch(Tag{0x55}));
  const auto cores = cpu.cores();
  ASSERT_EQ(cores.size(), 1U);
  EXPECT_EQ(cores[0].ip, 2U);
  for (double r : cores[0].registers) EXPECT_EQ(r, 0.0);
}

TYPED_TEST(CpuSemantics, LaunchRespectsMinRaw) {
  CpuConfig cfg;
  cfg.min_raw = 0.9;
  auto cpu = make_cpu<TypeParam>({make(Opcode::GlobalAnchor, 0, 0, 0, 0)}, cfg);
  EXPECT_FALSE(cpu.launch(Tag{~0ULL}));
  EXPECT_EQ(cpu.active_cores(), 0U);
}

TYPED_TEST(CpuSemantics, SaturatedLaunchIsDropped) {
  CpuConfig cfg;
  cfg.core_capacity = 3;
  auto cpu = make_cpu<TypeParam>(std::vector<Instruction>(10), cfg);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(cpu.launch(Tag{}));
  const auto before = cpu.cores();
  EXPECT_FALSE(cpu.launch(Tag{}));
  EXPECT_EQ(cpu.active_cores(), 3U);
  EXPECT_EQ(cpu.cores().size(), before.size());
}

TYPED_TEST(CpuSemantics, CoresRunInLaunchOrder) {
  auto cpu = make_cpu<TypeParam>({make(Opcode::GlobalAnchor, 0, 0, 0, 1),
                                  make(Opcode::Nop),
                                  make(Opcode::GlobalAnchor, 0, 0, 0, 2),
                                  make(Opcode::Add)});
  cpu.launch(Tag{2});
  cpu.launch(Tag{1});
  const auto cap = run_observed(cpu, 1);
  ASSERT_EQ(cap.executed.size(), 2U);
  EXPECT_EQ(cap.executed[0].first, 0U);
  EXPECT_EQ(cap.executed[1].first, 1U);
  EXPECT_EQ(cpu.cores()[0].ip, 3U);
  EXPECT_EQ(cpu.cores()[1].ip, 1U);
}

TYPED_TEST(CpuSemantics, TerminateRetiresCore) {
  auto cpu = make_cpu<TypeParam>(
      {make(Opcode::Terminate), make(Opcode::Response0)});
  cpu.launch(Tag{});
  cpu.step(5);
  EXPECT_EQ(cpu.active_cores(), 0U);
  EXPECT_FALSE(cpu.responses().last_response);
}

TYPED_TEST(CpuSemantics, ResponsesRecordLastExpressed) {
  auto cpu = make_cpu<TypeParam>({make(Opcode::Response0),
                                  make(response_opcode(3)),
                                  make(response_opcode(2))});
  cpu.launch(Tag{});
  cpu.step(3);
  EXPECT_EQ(cpu.responses().last_response, 2U);
  EXPECT_EQ(cpu.responses().expressions, 3U);
}

TYPED_TEST(CpuSemantics, RngDrawsEqualExecutedRngInstructions) {
  auto cpu = make_cpu<TypeParam>(
      {make(Opcode::RandUniform, 0), make(Opcode::Nop),
       make(Opcode::RandBernoulli, 1, 0), make(Opcode::RandUniform, 2)},
      {}, 5);
  cpu.launch(Tag{});
  const auto regs = run_observed(cpu, 10).last.at(0);
  EXPECT_EQ(cpu.rng().draws(), 3U);
  Rng oracle(5);
  const double u = oracle.uniform();
  EXPECT_EQ(regs[0], u);
  EXPECT_EQ(regs[1], oracle.uniform() < u ? 1.0 : 0.0);
  EXPECT_EQ(regs[2], oracle.uniform());
}

TYPED_TEST(CpuSemantics, RegulatorOpcodes) {
  // Module 0 (tag 0) writes module 1's regulator; module 1 is tagged ~0.
  auto code = small_constants();
  code.insert(code.begin(), make(Opcode::GlobalAnchor, 0, 0, 0, 0));
  code.push_back(make(Opcode::SetRegulator, 3, 0, 0, ~0ULL));     // 3
  code.push_back(make(Opcode::AdjustRegulator, 2, 0, 0, ~0ULL));  // 5
  code.push_back(make(Opcode::SenseRegulator, 6, 0, 0, ~0ULL));
  code.push_back(make(Opcode::GlobalAnchor, 0, 0, 0, ~0ULL));
  auto cpu = make_cpu<TypeParam>(code);
  cpu.launch(Tag{0});
  const auto regs = run_observed(cpu, 20).last.at(0);
  EXPECT_EQ(regs[6], 5.0);
  EXPECT_EQ(cpu.regulators()[1], 5.0);
  EXPECT_EQ(cpu.regulators()[0], 0.0);
  EXPECT_EQ(cpu.cache().generation(), 2U);

  auto clear = make_cpu<TypeParam>(
      {make(Opcode::ClearRegulator, 0, 0, 0, 5), make(Opcode::Nop)});
  clear.write_regulator(0, 0.7);
  clear.launch(Tag{});
  clear.step(2);
  EXPECT_EQ(clear.regulators()[0], 0.0);
  EXPECT_EQ(clear.cache().generation(), 2U);
}

TYPED_TEST(CpuSemantics, NonFiniteRegulatorWritesBecomeZero) {
  auto cpu = make_cpu<TypeParam>({make(Opcode::Nop)});
  cpu.write_regulator(0, std::numeric_limits<double>::infinity());
  EXPECT_EQ(cpu.regulators()[0], 0.0);
  cpu.write_regulator(0, std::nan(""));
  EXPECT_EQ(cpu.regulators()[0], 0.0);
}

TYPED_TEST(CpuSemantics, RegulatorWriteRedirectsLaunch) {
  auto cpu = make_cpu<TypeParam>({make(Opcode::GlobalAnchor, 0, 0, 0, 0),
                                  make(Opcode::GlobalAnchor, 0, 0, 0, 0xFF)});
  cpu.launch(Tag{0});
  EXPECT_EQ(cpu.cores().back().ip, 0U);
  cpu.write_regulator(1, 1.0);
  cpu.launch(Tag{0});
  EXPECT_EQ(cpu.cores().back().ip, 1U);
}

TYPED_TEST(CpuSemantics, KillAllCoresPreservesAgentState) {
  auto cpu = make_cpu<TypeParam>(std::vector<Instruction>(
      10, make(Opcode::RandUniform, 0)), {}, 3);
  cpu.write_regulator(0, 0.7);
  for (int i = 0; i < 3; ++i) cpu.launch(Tag{});
  cpu.step(2);
  cpu.responses().record(1);
  const Rng rng = cpu.rng();
  const auto gen = cpu.cache().generation();
  cpu.kill_all_cores();
  EXPECT_EQ(cpu.active_cores(), 0U);
  EXPECT_EQ(cpu.regulators()[0], 0.7);
  EXPECT_EQ(cpu.rng(), rng);
  EXPECT_EQ(cpu.cache().generation(), gen);
  EXPECT_EQ(cpu.responses().last_response, 1U);
  cpu.kill_all_cores();
  EXPECT_EQ(cpu.active_cores(), 0U);
}

TYPED_TEST(CpuSemantics, SplitSteppingMatchesSingleStep) {
  Rng gen(12);
  const auto set = sets::complete();
  for (int trial = 0; trial < 100; ++trial) {
    auto program =
        std::make_shared<const Program>(random_program(set, 60, gen));
    TypeParam a(program, {}, 9);
    TypeParam b(program, {}, 9);
    for (std::uint64_t t : {1, 2, 4}) {
      a.launch(Tag{t});
      b.launch(Tag{t});
    }
    a.step(64);
    b.step(13);
    b.step(51);
    EXPECT_EQ(a.rng(), b.rng());
    EXPECT_EQ(a.active_cores(), b.active_cores());
    EXPECT_EQ(a.cycles_elapsed(), b.cycles_elapsed());
    EXPECT_EQ(std::vector<double>(a.regulators().begin(), a.regulators().end()),
              std::vector<double>(b.regulators().begin(), b.regulators().end()));
    const auto ca = a.cores();
    const auto cb = b.cores();
    ASSERT_EQ(ca.size(), cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
      EXPECT_EQ(ca[i].ip, cb[i].ip);
      EXPECT_TRUE(std::equal(ca[i].registers.begin(), ca[i].registers.end(),
                             cb[i].registers.begin()));
    }
  }
}

TEST(LiteCpu, JumpFallsThroughWhenConditionFalse) {
  auto cpu = make_cpu<LiteCpu>({make(Opcode::LocalAnchor),
                                make(Opcode::JumpIfNotZero, 0),
                                make(Opcode::Nop)});
  cpu.launch(Tag{});
  cpu.step(2);
  EXPECT_EQ(cpu.cores()[0].ip, 2U);
}

TEST(LiteCpu, JumpMovesToBestLocalAnchor) {
  auto cpu = make_cpu<LiteCpu>(
      {make(Opcode::Equal, 0, 0, 1), make(Opcode::LocalAnchor, 0, 0, 0, 0x0F),
       make(Opcode::JumpIfNotZero, 1, 0, 0, 0xF0),
       make(Opcode::LocalAnchor, 0, 0, 0, 0xF0), make(Opcode::Nop)});
  cpu.launch(Tag{});
  cpu.step(3);
  EXPECT_EQ(cpu.cores()[0].ip, 3U);
}

TEST(LiteCpu, JumpWithoutAnchorFallsThrough) {
  auto cpu = make_cpu<LiteCpu>(
      {make(Opcode::Equal, 0, 0, 1), make(Opcode::JumpIfNotZero, 1),
       make(Opcode::Nop)});
  cpu.launch(Tag{});
  cpu.step(2);
  EXPECT_EQ(cpu.cores()[0].ip, 2U);
}

TEST(LiteCpu, CountdownLoopViaJumps) {
  // r1 = 1, r2 = 3; loop: r2 -= r1; jump back while r2 != 0; then Response_1.
  auto cpu = make_cpu<LiteCpu>(
      {make(Opcode::Equal, 0, 0, 1), make(Opcode::Add, 1, 1, 2),
       make(Opcode::Add, 2, 1, 2), make(Opcode::LocalAnchor, 0, 0, 0, 7),
       make(Opcode::Subtract, 2, 1, 2), make(Opcode::Response0),
       make(Opcode::JumpIfNotZero, 2, 0, 0, 7), make(response_opcode(1))});
  cpu.launch(Tag{});
  cpu.step(100);
  EXPECT_EQ(cpu.active_cores(), 0U);
  EXPECT_EQ(cpu.responses().expressions, 4U);
  EXPECT_EQ(cpu.responses().last_response, 1U);
}

TEST(FlexCpu, IfBlockRunsOrSkips) {
  for (std::uint8_t cond : {0, 1}) {
    // r1 = 1; if (r[cond] != 0) { Response_1 } Response_2
    auto cpu = make_cpu<FlexCpu>(
        {make(Opcode::Equal, 0, 0, 1), make(Opcode::JumpIfNotZero, cond),
         make(response_opcode(1)), make(Opcode::LocalAnchor),
         make(response_opcode(2))});
    cpu.launch(Tag{});
    cpu.step(10);
    EXPECT_EQ(cpu.responses().expressions, cond == 1 ? 2U : 1U);
    EXPECT_EQ(cpu.responses().last_response, 2U);
  }
}

TEST(FlexCpu, WhileBlockRepeatsUntilZero) {
  // r1 = 1, r2 = 3; while (r2 != 0) { r2 -= r1; Response_0 } Response_1
  auto cpu = make_cpu<FlexCpu>(
      {make(Opcode::Equal, 0, 0, 1), make(Opcode::Add, 1, 1, 2),
       make(Opcode::Add, 2, 1, 2), make(Opcode::JumpIfZero, 2),
       make(Opcode::Subtract, 2, 1, 2), make(Opcode::Response0),
       make(Opcode::LocalAnchor), make(response_opcode(1))});
  cpu.launch(Tag{});
  cpu.step(100);
  EXPECT_EQ(cpu.active_cores(), 0U);
  EXPECT_EQ(cpu.responses().expressions, 4U);
  EXPECT_EQ(cpu.responses().last_response, 1U);
}

TEST(FlexCpu, UnclosedWhileLoopsAtModuleEnd) {
  // r1 = 1, r2 = 2; while (r2 != 0) { r2 -= r1; Response_0 <module end>
  auto cpu = make_cpu<FlexCpu>(
      {make(Opcode::Equal, 0, 0, 1), make(Opcode::Add, 1, 1, 2),
       make(Opcode::JumpIfZero, 2), make(Opcode::Subtract, 2, 1, 2),
       make(Opcode::Response0)});
  cpu.launch(Tag{});
  cpu.step(100);
  EXPECT_EQ(cpu.active_cores(), 0U);
  EXPECT_EQ(cpu.responses().expressions, 2U);
}

TEST(FlexCpu, RejectsUndersizedRegisterFile) {
  CpuConfig cfg;
  cfg.register_count = 4;
  EXPECT_THROW(make_cpu<FlexCpu>({make(Opcode::Nop)}, cfg),
               std::invalid_argument);
}

TEST(FlexCpu, LargerRegisterFileIsAllowed) {
  CpuConfig cfg;
  cfg.register_count = 32;
  auto cpu = make_cpu<FlexCpu>({make(Opcode::Nop), make(Opcode::Nop)}, cfg);
  cpu.launch(Tag{});
  EXPECT_EQ(cpu.cores()[0].registers.size(), 32U);
}

TEST(Equivalence, NopProgramHasEmptyTraceOnBothBackends) {
  const Program p(std::vector<Instruction>(100, make(Opcode::Nop)));
  for (Backend b : {Backend::lite, Backend::flex}) {
    const auto trace = run_equivalence_trace(p, Tag{}, 128, 1, b);
    EXPECT_TRUE(trace.entries.empty());
    EXPECT_EQ(trace.instructions_executed, 100U);
    EXPECT_EQ(trace.rng_draws, 0U);
  }
}

TEST(Equivalence, ArithmeticProgramSeed42Matches) {
  Rng rng(42);
  const Program p = random_program(sets::arithmetic(), 100, rng);
  const auto lite = run_equivalence_trace(p, Tag{}, 128, 42, Backend::lite);
  const auto flex = run_equivalence_trace(p, Tag{}, 128, 42, Backend::flex);
  EXPECT_EQ(lite, flex);
}

TEST(Equivalence, MixedSafeProgramsMatchBitForBit) {
  Rng rng(2);
  const auto set = sets::equivalence_safe();
  for (int trial = 0; trial < 100; ++trial) {
    const Program p = random_program(set, 100, rng);
    const auto lite = run_equivalence_trace(p, Tag{}, 128, trial, Backend::lite);
    const auto flex = run_equivalence_trace(p, Tag{}, 128, trial, Backend::flex);
    ASSERT_EQ(lite, flex) << "trial " << trial;
  }
}

TEST(Equivalence, ControlFlowIsRefused) {
  const Program p({make(Opcode::Nop), make(Opcode::JumpIfNotZero)});
  try {
    (void)run_equivalence_trace(p, Tag{}, 10, 0, Backend::lite);
    FAIL() << "expected refusal";
  } catch (const NotEquivalenceSafe& e) {
    EXPECT_EQ(e.position(), 1U);
    EXPECT_EQ(e.opcode(), Opcode::JumpIfNotZero);
  }
}

TEST(Semantics, IntegerConversionSaturatesAndZeroesNonFinite) {
  EXPECT_EQ(semantics::to_integer(2.9), 2);
  EXPECT_EQ(semantics::to_integer(-2.9), -2);
  EXPECT_EQ(semantics::to_integer(1e300), INT64_MAX);
  EXPECT_EQ(semantics::to_integer(-1e300), INT64_MIN);
  EXPECT_EQ(semantics::to_integer(std::nan("")), 0);
  EXPECT_EQ(semantics::to_integer(-std::numeric_limits<double>::infinity()), 0);
  EXPECT_EQ(semantics::shift_left(1.0, 65.0), 2.0);
  EXPECT_EQ(semantics::probability(-1.0), 0.0);
  EXPECT_EQ(semantics::probability(2.0), 1.0);
  EXPECT_EQ(semantics::probability(std::nan("")), 0.0);
}

}  // namespace
}  // namespace sgpvm
