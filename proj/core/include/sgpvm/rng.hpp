#pragma once

#include <cstdint>
#include <initializer_list>

namespace sgpvm {

/// splitmix64 finalizer step; advances `state` and returns the mixed value.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a root seed and a path of
/// integers, e.g. (seed, generation, individual).
[[nodiscard]] constexpr std::uint64_t derive_seed(
    std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = root;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t p : path) {
    state ^= p + 0x632BE59BD9B4E019ULL + (out << 6) + (out >> 2);
    out = splitmix64(state);
  }
  return out;
}

/// xorshift64* seeded through splitmix64. The exact sequence is part of the
/// replay contract: both backends and every run manifest depend on it.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed = 0) { reseed(seed); }

  constexpr void reseed(std::uint64_t seed) {
    std::uint64_t s = seed;
    state_ = splitmix64(s);
    if (state_ == 0) state_ = 0x2545F4914F6CDD1DULL;
    draws_ = 0;
  }

  constexpr std::uint64_t next() {
    ++draws_;
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound); bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * bound) >> 64);
  }

  constexpr bool bernoulli(double p) { return uniform() < p; }

  [[nodiscard]] constexpr std::uint64_t draws() const { return draws_; }
  [[nodiscard]] constexpr std::uint64_t state() const { return state_; }

  friend constexpr bool operator==(const Rng&, const Rng&) = default;

 private:
  std::uint64_t state_ = 0;
  std::uint64_t draws_ = 0;
};

}  // namespace sgpvm
