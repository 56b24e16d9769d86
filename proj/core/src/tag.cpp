#include "sgpvm/tag.hpp"

#include <charconv>
#include <stdexcept>

namespace sgpvm {

std::string to_hex(Tag tag) {
  std::string out(16, '0');
  char buf[16];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), tag.bits, 16);
  const auto len = static_cast<std::size_t>(end - buf);
  out.replace(16 - len, len, buf, len);
  return out;
}

Tag tag_from_hex(std::string_view text) {
  if (text.size() != 16) {
    throw std::invalid_argument("tag must be 16 hex digits: '" +
                                std::string(text) + "'");
  }
  std::uint64_t bits = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), bits, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed tag: '" + std::string(text) + "'");
  }
  return Tag{bits};
}

}  // namespace sgpvm
