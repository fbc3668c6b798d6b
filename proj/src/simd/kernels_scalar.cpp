#include <bit>

#include "dvlae/simd/kernels.hpp"

namespace dvlae::simd {
namespace {

std::uint64_t xor_popcount_scalar(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::popcount(a[i] ^ b[i]);
  return total;
}

void xor_words_scalar(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                      std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
}

double squared_distance_scalar(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void student_t_row_scalar(double x, double y, std::span<const double> xs,
                          std::span<const double> ys, std::span<double> out) {
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double dx = x - xs[j];
    const double dy = y - ys[j];
    const double d2 = dx * dx + dy * dy;
    out[j] = 1.0 / (1.0 + d2);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", xor_popcount_scalar, xor_words_scalar,
                                 squared_distance_scalar, student_t_row_scalar};
  return table;
}

}  // namespace dvlae::simd
