#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sgpvm/tag.hpp"

namespace sgpvm {

/// One additive regulator per program module. Positive values promote a
/// module's expression, negative values repress it.
using RegulationState = std::vector<double>;

/// Regulated best match. Among modules whose raw score clears `min_raw`,
/// picks the one maximizing raw score + regulator; ties go to the lowest
/// index. Throws std::logic_error when the two spans differ in length.
[[nodiscard]] std::optional<std::size_t> best_match(
    Tag query, std::span<const Tag> module_tags,
    std::span<const double> regulators, double min_raw = 0.0);

/// Unregulated best match with no threshold (lowest index on ties).
[[nodiscard]] std::optional<std::size_t> best_raw_match(
    Tag query, std::span<const Tag> module_tags);

/// Query -> module cache for one agent. Every regulator write must go
/// through `invalidate()`, which drops all entries and bumps the generation.
class MatchCache {
 public:
  [[nodiscard]] std::optional<std::size_t> lookup(
      Tag query, std::span<const Tag> module_tags,
      std::span<const double> regulators, double min_raw);

  void invalidate() {
    entries_.clear();
    ++generation_;
  }

  [[nodiscard]] std::uint64_t generation() const { return generation_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::uint64_t hits() const { return hits_; }
  [[nodiscard]] std::uint64_t misses() const { return misses_; }

 private:
  std::unordered_map<std::uint64_t, std::optional<std::size_t>> entries_;
  std::uint64_t generation_ = 0;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace sgpvm
