#pragma once

#include <cstddef>
#include <cstdint>

namespace covpolar {

enum class KernelKind { scalar, avx2 };

bool avx2_available();
// Kernel used by cap_counts when no kind is given: AVX2 when the CPU has it,
// unless COVPOLAR_KERNEL=scalar is set or force_kernel overrides.
KernelKind active_kernel();
void force_kernel(KernelKind k);
void reset_kernel();
char const* kernel_name(KernelKind k);

// counts[c] += #{i < n : |sum_k u[k][i] * w[c * d + k]| >= t[c]}.
// Dot products are accumulated in float, in coordinate order, without fused
// multiply-add, so every kernel returns identical counts.
void cap_counts(float const* const* u, int d, std::size_t n, float const* w, float const* t,
                std::size_t caps, std::uint64_t* counts);
void cap_counts(float const* const* u, int d, std::size_t n, float const* w, float const* t,
                std::size_t caps, std::uint64_t* counts, KernelKind kind);

namespace kernels {
void cap_counts_scalar(float const* const* u, int d, std::size_t begin, std::size_t end,
                       float const* w, float const* t, std::size_t caps,
                       std::uint64_t* counts);
void cap_counts_avx2(float const* const* u, int d, std::size_t begin, std::size_t end,
                     float const* w, float const* t, std::size_t caps, std::uint64_t* counts);
}  // namespace kernels

}  // namespace covpolar
