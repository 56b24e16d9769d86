#include "sgpvm/tag_match.hpp"

#include <stdexcept>

namespace sgpvm {

std::optional<std::size_t> best_match(Tag query,
                                      std::span<const Tag> module_tags,
                                      std::span<const double> regulators,
                                      double min_raw) {
  if (module_tags.size() != regulators.size()) {
    throw std::logic_error("best_match: module/regulator length mismatch");
  }
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t i = 0; i < module_tags.size(); ++i) {
    const double raw = match_score(query, module_tags[i]);
    if (raw < min_raw) continue;
    const double effective = raw + regulators[i];
    if (!best || effective > best_score) {
      best = i;
      best_score = effective;
    }
  }
  return best;
}

std::optional<std::size_t> best_raw_match(Tag query,
                                          std::span<const Tag> module_tags) {
  std::optional<std::size_t> best;
  unsigned best_distance = kTagWidth + 1;
  for (std::size_t i = 0; i < module_tags.size(); ++i) {
    const unsigned d = hamming_distance(query, module_tags[i]);
    if (d < best_distance) {
      best = i;
      best_distance = d;
    }
  }
  return best;
}

std::optional<std::size_t> MatchCache::lookup(
    Tag query, std::span<const Tag> module_tags,
    std::span<const double> regulators, double min_raw) {
  if (auto it = entries_.find(query.bits); it != entries_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  auto result = best_match(query, module_tags, regulators, min_raw);
  entries_.emplace(query.bits, result);
  return result;
}

}  // namespace sgpvm
