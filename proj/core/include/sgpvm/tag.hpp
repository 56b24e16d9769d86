#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace sgpvm {

inline constexpr std::size_t kTagWidth = 64;

/// Fixed-width bit string labelling modules, signals and jump anchors.
struct Tag {
  std::uint64_t bits = 0;

  constexpr Tag() = default;
  constexpr explicit Tag(std::uint64_t b) : bits(b) {}

  [[nodiscard]] constexpr Tag complement() const { return Tag{~bits}; }

  friend constexpr bool operator==(Tag, Tag) = default;
};

[[nodiscard]] constexpr unsigned hamming_distance(Tag a, Tag b) {
  return static_cast<unsigned>(std::popcount(a.bits ^ b.bits));
}

/// Normalized Hamming similarity: 1 - distance / width. Always one of k/64.
[[nodiscard]] constexpr double match_score(Tag a, Tag b) {
  return 1.0 - static_cast<double>(hamming_distance(a, b)) /
                   static_cast<double>(kTagWidth);
}

/// 16 lowercase hex digits.
[[nodiscard]] std::string to_hex(Tag tag);

/// Accepts exactly 16 hex digits; throws std::invalid_argument otherwise.
[[nodiscard]] Tag tag_from_hex(std::string_view text);

}  // namespace sgpvm
