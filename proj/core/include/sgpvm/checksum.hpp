#pragma once

#include <string>
#include <string_view>

namespace sgpvm {

/// Lowercase hex SHA-256 of `data`.
[[nodiscard]] std::string sha256_hex(std::string_view data);

}  // namespace sgpvm
