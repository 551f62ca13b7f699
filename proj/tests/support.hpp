#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "covpolar/exact/gram.hpp"
#include "covpolar/exact/matrix.hpp"

namespace covpolar::testing {

// Product of random elementary column operations and signed swaps.
inline IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = 12) {
  IntMatrix u = IntMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int s = 0; s < steps && n > 1; ++s) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    int c = coef(rng);
    for (std::size_t r = 0; r < n; ++r) u(r, i) += c * u(r, j);
    if (rng() & 1) {
      for (std::size_t r = 0; r < n; ++r) std::swap(u(r, i), u(r, j));
    }
    if (rng() & 1) {
      for (std::size_t r = 0; r < n; ++r) u(r, i) = -u(r, i);
    }
  }
  return u;
}

inline IntMatrix congruent(IntMatrix const& g, IntMatrix const& u) {
  return u.transpose() * g * u;
}

// Every integer vector in the box [-b, b]^n, excluding zero.
template <class F>
void for_each_in_box(std::size_t n, int b, F&& f) {
  std::vector<long> x(n, -b);
  for (;;) {
    bool zero = true;
    for (long v : x) zero = zero && v == 0;
    if (!zero) f(x);
    std::size_t i = 0;
    while (i < n && x[i] == b) x[i++] = -b;
    if (i == n) return;
    ++x[i];
  }
}

inline IntMatrix a3_gram() {
  return IntMatrix{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
}

}  // namespace covpolar::testing
