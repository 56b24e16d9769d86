#pragma once

// Value-level opcode semantics shared by both interpreter backends. Keeping
// these in one place is what makes cross-backend traces comparable.

#include <cmath>
#include <cstdint>
#include <limits>

#include "sgpvm/opcode.hpp"

namespace sgpvm::semantics {

/// Truncation toward zero, saturating at the int64 range; non-finite -> 0.
[[nodiscard]] inline std::int64_t to_integer(double x) {
  if (!std::isfinite(x)) return 0;
  constexpr double kLimit = 9223372036854775808.0;  // 2^63
  if (x >= kLimit) return std::numeric_limits<std::int64_t>::max();
  if (x < -kLimit) return std::numeric_limits<std::int64_t>::min();
  return static_cast<std::int64_t>(x);
}

[[nodiscard]] inline double from_integer(std::int64_t v) {
  return static_cast<double>(v);
}

[[nodiscard]] inline double divide(double a, double b) {
  return b == 0.0 ? 0.0 : a / b;
}

[[nodiscard]] inline double shift_left(double a, double b) {
  const auto value = static_cast<std::uint64_t>(to_integer(a));
  const auto count = static_cast<std::uint64_t>(to_integer(b)) & 63U;
  return from_integer(static_cast<std::int64_t>(value << count));
}

[[nodiscard]] inline double shift_right(double a, double b) {
  const auto count = static_cast<std::uint64_t>(to_integer(b)) & 63U;
  return from_integer(to_integer(a) >> count);  // arithmetic shift
}

[[nodiscard]] inline double bit_and(double a, double b) {
  return from_integer(to_integer(a) & to_integer(b));
}
[[nodiscard]] inline double bit_or(double a, double b) {
  return from_integer(to_integer(a) | to_integer(b));
}
[[nodiscard]] inline double bit_xor(double a, double b) {
  return from_integer(to_integer(a) ^ to_integer(b));
}
[[nodiscard]] inline double bit_not(double a) {
  return from_integer(~to_integer(a));
}

[[nodiscard]] inline double truth(bool b) { return b ? 1.0 : 0.0; }

/// Clamp to [0, 1]; NaN reads as 0.
[[nodiscard]] inline double probability(double p) {
  if (!(p > 0.0)) return 0.0;
  return p > 1.0 ? 1.0 : p;
}

/// Regulators only ever hold finite values.
[[nodiscard]] inline double finite_or_zero(double x) {
  return std::isfinite(x) ? x : 0.0;
}

}  // namespace sgpvm::semantics
