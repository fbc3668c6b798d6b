#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "dvlae/bits.hpp"
#include "dvlae/simd/kernels.hpp"

using dvlae::simd::KernelTable;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> out{&dvlae::simd::scalar_kernels()};
  if (const KernelTable* avx2 = dvlae::simd::avx2_kernels()) out.push_back(avx2);
  return out;
}

std::vector<std::uint64_t> random_words(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) x = rng();
  return w;
}

std::vector<double> random_reals(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("active kernel table is one of the compiled variants") {
  const auto& active = dvlae::simd::active_kernels();
  bool found = false;
  for (const auto* k : variants()) found = found || k->name == active.name;
  CHECK(found);
  MESSAGE("active kernels: " << active.name);
}

TEST_CASE("xor_popcount matches a per-word popcount for every length") {
  std::mt19937_64 rng(1);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_words(rng, n);
    const auto b = random_words(rng, n);
    std::uint64_t expected = 0;
    for (std::size_t i = 0; i < n; ++i) expected += std::popcount(a[i] ^ b[i]);
    for (const auto* k : variants()) {
      CAPTURE(k->name);
      CAPTURE(n);
      CHECK(k->xor_popcount(a, b) == expected);
    }
  }
}

TEST_CASE("xor_words is identical across variants") {
  std::mt19937_64 rng(2);
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto a = random_words(rng, n);
    const auto b = random_words(rng, n);
    std::vector<std::uint64_t> expected(n);
    for (std::size_t i = 0; i < n; ++i) expected[i] = a[i] ^ b[i];
    for (const auto* k : variants()) {
      std::vector<std::uint64_t> out(n, 0xdeadbeef);
      k->xor_words(a, b, out);
      CHECK(out == expected);
    }
  }
}

TEST_CASE("squared_distance agrees across variants to 1e-12 relative") {
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n <= 70; ++n) {
    const auto a = random_reals(rng, n);
    const auto b = random_reals(rng, n);
    long double expected = 0;
    for (std::size_t i = 0; i < n; ++i) expected += (long double)(a[i] - b[i]) * (a[i] - b[i]);
    for (const auto* k : variants()) {
      const double got = k->squared_distance(a, b);
      CHECK(std::abs(got - double(expected)) <= 1e-12 * std::max(1.0, double(expected)));
    }
  }
}

TEST_CASE("student_t_row is bit-identical across variants") {
  std::mt19937_64 rng(4);
  const auto& scalar = dvlae::simd::scalar_kernels();
  for (std::size_t n = 0; n <= 41; ++n) {
    const auto xs = random_reals(rng, n);
    const auto ys = random_reals(rng, n);
    std::vector<double> ref(n);
    scalar.student_t_row(1.25, -3.5, xs, ys, ref);
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = 1.25 - xs[j];
      const double dy = -3.5 - ys[j];
      CHECK(ref[j] == 1.0 / (1.0 + (dx * dx + dy * dy)));
    }
    for (const auto* k : variants()) {
      std::vector<double> out(n);
      k->student_t_row(1.25, -3.5, xs, ys, out);
      CHECK(out == ref);
    }
  }
}

TEST_CASE("hamming over BitVector uses the active kernels consistently") {
  std::mt19937_64 rng(5);
  dvlae::BitVector a(200), b(200);
  std::size_t expected = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const bool x = rng() & 1;
    const bool y = rng() & 1;
    a.set(i, x);
    b.set(i, y);
    expected += x != y;
  }
  CHECK(dvlae::hamming(a, b) == expected);
  CHECK(dvlae::bitwise_xor(a, b).count() == expected);
}
