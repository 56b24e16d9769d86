#pragma once

#include <utility>

#include "sgpvm/cpu_common.hpp"
#include "sgpvm/flex_cpu.hpp"
#include "sgpvm/lite_cpu.hpp"

namespace sgpvm {

/// Calls `fn.template operator()<Cpu>()` with the concrete cpu type for
/// `backend`, so templated evaluation code is instantiated once per backend.
template <typename Fn>
decltype(auto) with_backend(Backend backend, Fn&& fn) {
  switch (backend) {
    case Backend::flex:
      return std::forward<Fn>(fn).template operator()<FlexCpu>();
    case Backend::lite:
    default:
      return std::forward<Fn>(fn).template operator()<LiteCpu>();
  }
}

}  // namespace sgpvm
