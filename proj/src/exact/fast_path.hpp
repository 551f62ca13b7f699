#pragma once

#include "covpolar/exact/integer.hpp"

namespace covpolar::detail {

// Runs f on the int64 fast path, falling back to BigInt on overflow.
template <class F>
auto with_fast_path(F&& f) {
  try {
    return f(SafeInt{});
  } catch (ExactOverflow const&) {
    return f(BigInt{});
  }
}

}  // namespace covpolar::detail
