#include "sgpvm/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgpvm {

std::size_t elite_select(std::span<const double> fitnesses) {
  if (fitnesses.empty()) {
    throw std::invalid_argument("elite_select: empty population");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < fitnesses.size(); ++i) {
    if (fitnesses[i] > fitnesses[best]) best = i;
  }
  return best;
}

std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng) {
  if (fitnesses.empty()) {
    throw std::invalid_argument("roulette_select: empty population");
  }
  std::vector<double> cumulative(fitnesses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    if (!(fitnesses[i] >= 0.0) || std::isinf(fitnesses[i])) {
      throw std::invalid_argument(
          "roulette_select: fitness must be finite and non-negative");
    }
    total += fitnesses[i];
    cumulative[i] = total;
  }
  if (total == 0.0) return rng.below(fitnesses.size());
  const double spin = rng.uniform() * total;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), spin);
  // spin < total, so an element strictly above it always exists; the min is
  // only a guard against rounding in the running sum.
  return std::min(static_cast<std::size_t>(it - cumulative.begin()),
                  fitnesses.size() - 1);
}

std::vector<std::size_t> lexicase_survivors(
    const CaseScores& scores, std::span<const std::size_t> case_order) {
  std::vector<std::size_t> pool(scores.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::size_t> next;
  for (std::size_t c : case_order) {
    if (pool.size() <= 1) break;
    double best = scores[pool.front()][c];
    for (std::size_t i : pool) best = std::max(best, scores[i][c]);
    next.clear();
    for (std::size_t i : pool) {
      if (scores[i][c] == best) next.push_back(i);
    }
    pool.swap(next);
  }
  return pool;
}

std::size_t lexicase_select(const CaseScores& scores, Rng& rng) {
  if (scores.empty()) {
    throw std::invalid_argument("lexicase_select: empty population");
  }
  const std::size_t cases = scores.front().size();
  if (cases == 0) throw std::invalid_argument("lexicase_select: no cases");
  for (const auto& row : scores) {
    if (row.size() != cases) {
      throw std::invalid_argument("lexicase_select: ragged case scores");
    }
  }
  std::vector<std::size_t> order(cases);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = cases - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  const auto survivors = lexicase_survivors(scores, order);
  return survivors[rng.below(survivors.size())];
}

}  // namespace sgpvm
