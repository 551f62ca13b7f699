#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>

#include "covpolar/kernels/cap_count.hpp"

namespace covpolar {

namespace {

// -1: not forced.
std::atomic<int> forced{-1};

KernelKind detect() {
  char const* env = std::getenv("COVPOLAR_KERNEL");
  if (env && std::strcmp(env, "scalar") == 0) return KernelKind::scalar;
  return avx2_available() ? KernelKind::avx2 : KernelKind::scalar;
}

// Points per tile; the tile's columns stay in cache while every cap is tested.
constexpr std::size_t kTile = 4096;

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

KernelKind active_kernel() {
  int f = forced.load();
  if (f >= 0) return static_cast<KernelKind>(f);
  static KernelKind const detected = detect();
  return detected;
}

void force_kernel(KernelKind k) { forced = static_cast<int>(k); }
void reset_kernel() { forced = -1; }

char const* kernel_name(KernelKind k) { return k == KernelKind::avx2 ? "avx2" : "scalar"; }

void cap_counts(float const* const* u, int d, std::size_t n, float const* w, float const* t,
                std::size_t caps, std::uint64_t* counts) {
  cap_counts(u, d, n, w, t, caps, counts, active_kernel());
}

void cap_counts(float const* const* u, int d, std::size_t n, float const* w, float const* t,
                std::size_t caps, std::uint64_t* counts, KernelKind kind) {
  if (kind == KernelKind::avx2 && !avx2_available()) kind = KernelKind::scalar;
  for (std::size_t begin = 0; begin < n; begin += kTile) {
    std::size_t const end = std::min(n, begin + kTile);
    if (kind == KernelKind::avx2) {
      kernels::cap_counts_avx2(u, d, begin, end, w, t, caps, counts);
    } else {
      kernels::cap_counts_scalar(u, d, begin, end, w, t, caps, counts);
    }
  }
}

}  // namespace covpolar
