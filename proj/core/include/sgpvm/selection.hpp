#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgpvm/rng.hpp"

namespace sgpvm {

/// Per-individual pass/fail (or graded) score on each test case.
using CaseScores = std::vector<std::vector<double>>;

/// Index of the maximum fitness, lowest index on ties. Throws
/// std::invalid_argument on an empty span.
[[nodiscard]] std::size_t elite_select(std::span<const double> fitnesses);

/// Fitness-proportional pick; uniform when every fitness is zero. Throws
/// std::invalid_argument on an empty span or a negative / NaN fitness.
[[nodiscard]] std::size_t roulette_select(std::span<const double> fitnesses,
                                          Rng& rng);

/// Survivors of lexicase filtering when cases are visited in `case_order`.
/// Filtering stops early once a single candidate remains.
[[nodiscard]] std::vector<std::size_t> lexicase_survivors(
    const CaseScores& scores, std::span<const std::size_t> case_order);

/// Shuffles the case order, filters, and picks uniformly among survivors.
/// Throws std::invalid_argument on an empty population, zero cases, or
/// ragged score vectors.
[[nodiscard]] std::size_t lexicase_select(const CaseScores& scores, Rng& rng);

}  // namespace sgpvm
