#include <cmath>

#include "covpolar/kernels/cap_count.hpp"

namespace covpolar::kernels {

void cap_counts_scalar(float const* const* u, int d, std::size_t begin, std::size_t end,
                       float const* w, float const* t, std::size_t caps,
                       std::uint64_t* counts) {
  for (std::size_t c = 0; c < caps; ++c) {
    float const* wc = w + c * d;
    std::uint64_t hits = 0;
    for (std::size_t i = begin; i < end; ++i) {
      float acc = u[0][i] * wc[0];
      for (int k = 1; k < d; ++k) acc = acc + u[k][i] * wc[k];
      hits += std::fabs(acc) >= t[c];
    }
    counts[c] += hits;
  }
}

}  // namespace covpolar::kernels
