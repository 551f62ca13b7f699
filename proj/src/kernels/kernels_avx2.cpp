#include <immintrin.h>

#include <bit>
#include <cmath>

#include "covpolar/kernels/cap_count.hpp"

namespace covpolar::kernels {

void cap_counts_avx2(float const* const* u, int d, std::size_t begin, std::size_t end,
                     float const* w, float const* t, std::size_t caps, std::uint64_t* counts) {
  __m256 const abs_mask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
  std::size_t const vec_end = begin + (end - begin) / 8 * 8;
  for (std::size_t c = 0; c < caps; ++c) {
    float const* wc = w + c * d;
    __m256 const tc = _mm256_set1_ps(t[c]);
    std::uint64_t hits = 0;
    for (std::size_t i = begin; i < vec_end; i += 8) {
      __m256 acc = _mm256_mul_ps(_mm256_loadu_ps(u[0] + i), _mm256_set1_ps(wc[0]));
      for (int k = 1; k < d; ++k) {
        acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_loadu_ps(u[k] + i), _mm256_set1_ps(wc[k])));
      }
      __m256 const hit = _mm256_cmp_ps(_mm256_and_ps(acc, abs_mask), tc, _CMP_GE_OQ);
      hits += std::popcount(static_cast<unsigned>(_mm256_movemask_ps(hit)));
    }
    for (std::size_t i = vec_end; i < end; ++i) {
      float acc = u[0][i] * wc[0];
      for (int k = 1; k < d; ++k) acc = acc + u[k][i] * wc[k];
      hits += std::fabs(acc) >= t[c];
    }
    counts[c] += hits;
  }
}

}  // namespace covpolar::kernels
