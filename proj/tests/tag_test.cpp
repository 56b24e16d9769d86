#include <gtest/gtest.h>

#include <set>

#include "sgpvm/rng.hpp"
#include "sgpvm/tag.hpp"
#include "sgpvm/tag_match.hpp"
#include "support/oracles.hpp"

namespace sgpvm {
namespace {

TEST(MatchScore, IdenticalTagsScoreOne) {
  const Tag t{0x0123456789abcdefULL};
  EXPECT_EQ(match_score(t, t), 1.0);
}

TEST(MatchScore, ComplementScoresZero) {
  const Tag t{0x0123456789abcdefULL};
  EXPECT_EQ(match_score(t, t.complement()), 0.0);
}

TEST(MatchScore, SixteenDifferingBitsScoresThreeQuarters) {
  const Tag a{0xF0F0F0F0F0F0F0F0ULL};
  const Tag b{a.bits ^ 0x000000000000FFFFULL};
  ASSERT_EQ(oracle::popcount_loop(a.bits ^ b.bits), 16U);
  EXPECT_EQ(match_score(a, b), 0.75);
}

TEST(MatchScore, AgreesWithLoopOracleAndIsSymmetric) {
  Rng rng(7);
  std::set<double> lattice;
  for (int k = 0; k <= 64; ++k) lattice.insert(k / 64.0);
  for (int i = 0; i < 5000; ++i) {
    const Tag a{rng.next()};
    const Tag b{rng.next() & rng.next()};
    EXPECT_EQ(match_score(a, b), oracle::match_score(a.bits, b.bits));
    EXPECT_EQ(match_score(a, b), match_score(b, a));
    EXPECT_TRUE(lattice.contains(match_score(a, b)));
  }
}

TEST(TagHex, RoundTripsSixteenLowercaseDigits) {
  const Tag t{0x00ab00cd00ef0012ULL};
  EXPECT_EQ(to_hex(t), "00ab00cd00ef0012");
  EXPECT_EQ(tag_from_hex("00ab00cd00ef0012"), t);
  EXPECT_EQ(tag_from_hex("00AB00CD00EF0012"), t);
}

TEST(TagHex, RejectsBadInput) {
  EXPECT_THROW((void)tag_from_hex(""), std::invalid_argument);
  EXPECT_THROW((void)tag_from_hex("123"), std::invalid_argument);
  EXPECT_THROW((void)tag_from_hex("00ab00cd00ef00zz"), std::invalid_argument);
  EXPECT_THROW((void)tag_from_hex("00ab00cd00ef001200"), std::invalid_argument);
}

TEST(BestMatch, ExactMatchWins) {
  const Tag t{0x5555};
  const std::vector<Tag> tags{t, t.complement()};
  const std::vector<double> regs{0.0, 0.0};
  EXPECT_EQ(best_match(t, tags, regs), 0U);
}

TEST(BestMatch, EmptyListHasNoMatch) {
  EXPECT_FALSE(best_match(Tag{1}, {}, {}).has_value());
}

TEST(BestMatch, RegulationCanOverturnRawScore) {
  // Raw scores 58/64 and 38/64; +0.5 on the second flips the winner.
  const Tag q{0};
  const Tag near{(1ULL << 6) - 1};   // 6 bits differ: 58/64
  const Tag far{(1ULL << 26) - 1};   // 26 bits differ: 38/64
  const std::vector<Tag> tags{near, far};
  EXPECT_EQ(best_match(q, tags, std::vector<double>{0.0, 0.0}), 0U);
  EXPECT_EQ(best_match(q, tags, std::vector<double>{0.0, 0.5}), 1U);
}

TEST(BestMatch, TiesGoToLowestIndex) {
  const std::vector<Tag> tags{Tag{1}, Tag{2}, Tag{1}};
  EXPECT_EQ(best_match(Tag{0}, tags, std::vector<double>(3, 0.0)), 0U);
}

TEST(BestMatch, MinRawExcludesWeakModules) {
  const std::vector<Tag> tags{Tag{~0ULL}};
  EXPECT_FALSE(best_match(Tag{0}, tags, std::vector<double>{10.0}, 0.5));
  EXPECT_EQ(best_match(Tag{0}, tags, std::vector<double>{10.0}, 0.0), 0U);
}

TEST(BestMatch, LengthMismatchIsALogicError) {
  const std::vector<Tag> tags{Tag{1}, Tag{2}};
  EXPECT_THROW((void)best_match(Tag{0}, tags, std::vector<double>{0.0}),
               std::logic_error);
}

TEST(BestMatch, AgreesWithOracleOnRandomInstances) {
  Rng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = rng.below(12);
    std::vector<Tag> tags;
    std::vector<std::uint64_t> raw;
    std::vector<double> regs;
    for (std::size_t i = 0; i < n; ++i) {
      tags.emplace_back(rng.next());
      raw.push_back(tags.back().bits);
      regs.push_back(rng.uniform() - 0.5);
    }
    const Tag q{rng.next()};
    const double min_raw = rng.uniform() * 0.7;
    EXPECT_EQ(best_match(q, tags, regs, min_raw),
              oracle::best_match(q.bits, raw, regs, min_raw));
  }
}

TEST(BestMatch, AppendingWeakerModulesKeepsWinner) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Tag> tags{Tag{rng.next()}, Tag{rng.next()}};
    std::vector<double> regs{0.0, 0.0};
    const Tag q{rng.next()};
    const auto winner = best_match(q, tags, regs);
    ASSERT_TRUE(winner);
    const double score = match_score(q, tags[*winner]);
    for (int k = 0; k < 4; ++k) {
      tags.push_back(Tag{rng.next()});
      regs.push_back(score - match_score(q, tags.back()) - 0.01);
    }
    EXPECT_EQ(best_match(q, tags, regs), winner);
  }
}

TEST(MatchCache, SecondIdenticalQueryHits) {
  MatchCache cache;
  const std::vector<Tag> tags{Tag{1}, Tag{2}};
  const std::vector<double> regs{0.0, 0.0};
  const auto first = cache.lookup(Tag{2}, tags, regs, 0.0);
  EXPECT_EQ(cache.misses(), 1U);
  const auto second = cache.lookup(Tag{2}, tags, regs, 0.0);
  EXPECT_EQ(cache.hits(), 1U);
  EXPECT_EQ(first, second);
}

TEST(MatchCache, InvalidateClearsAndBumpsGeneration) {
  MatchCache cache;
  const std::vector<Tag> tags{Tag{1}, Tag{2}};
  std::vector<double> regs{0.0, 0.0};
  EXPECT_EQ(cache.lookup(Tag{1}, tags, regs, 0.0), 0U);
  regs[1] = 5.0;
  cache.invalidate();
  EXPECT_EQ(cache.generation(), 1U);
  EXPECT_EQ(cache.size(), 0U);
  EXPECT_EQ(cache.lookup(Tag{1}, tags, regs, 0.0), 1U);
  EXPECT_EQ(cache.misses(), 2U);
}

TEST(MatchCache, InterleavedWritesMatchUncachedOracle) {
  Rng rng(2024);
  std::vector<Tag> tags;
  std::vector<std::uint64_t> raw;
  for (int i = 0; i < 8; ++i) {
    tags.emplace_back(rng.next());
    raw.push_back(tags.back().bits);
  }
  std::vector<double> regs(8, 0.0);
  std::vector<Tag> queries;
  for (int i = 0; i < 6; ++i) queries.emplace_back(rng.next());
  MatchCache cache;
  for (int step = 0; step < 1000; ++step) {
    if (rng.below(5) == 0) {
      regs[rng.below(8)] = rng.uniform() * 2.0 - 1.0;
      cache.invalidate();
    }
    const Tag q = queries[rng.below(queries.size())];
    EXPECT_EQ(cache.lookup(q, tags, regs, 0.0),
              oracle::best_match(q.bits, raw, regs, 0.0));
  }
  EXPECT_GT(cache.hits(), 0U);
}

}  // namespace
}  // namespace sgpvm
