#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dvlae::simd {

// Data-parallel inner loops. Every kernel has a portable scalar reference and
// optionally an AVX2 variant; the active table is chosen once at runtime from
// CPU features and may be forced with DVLAE_SIMD=scalar|avx2.
//
// Equivalence contract (enforced by tests/test_kernels.cpp):
//   xor_popcount, xor_words, student_t_row  bit-identical across variants
//   squared_distance                        equal to 1e-12 relative (lane-wise
//                                           partial sums reorder the addition)
struct KernelTable {
  std::string_view name;

  // popcount(a ^ b) over equal-length word arrays.
  std::uint64_t (*xor_popcount)(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b);

  // out[i] = a[i] ^ b[i]
  void (*xor_words)(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                    std::span<std::uint64_t> out);

  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(std::span<const double> a, std::span<const double> b);

  // out[j] = 1 / (1 + (x - xs[j])^2 + (y - ys[j])^2)
  void (*student_t_row)(double x, double y, std::span<const double> xs,
                        std::span<const double> ys, std::span<double> out);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr if it was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Table used by the library. Resolved once per process.
const KernelTable& active_kernels();

}  // namespace dvlae::simd
