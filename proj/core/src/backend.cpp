#include <stdexcept>
#include <string>

#include "sgpvm/cpu_common.hpp"

namespace sgpvm {

std::string_view backend_name(Backend b) {
  return b == Backend::lite ? "lite" : "flex";
}

Backend backend_from_name(std::string_view name) {
  if (name == "lite") return Backend::lite;
  if (name == "flex") return Backend::flex;
  throw std::invalid_argument("unknown backend '" + std::string(name) +
                              "' (expected lite or flex)");
}

}  // namespace sgpvm
