#include "dvlae/bits.hpp"

#include <bit>

#include "dvlae/error.hpp"
#include "dvlae/simd/kernels.hpp"

namespace dvlae {

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::string BitVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t bytes = (size_ + 7) / 8;
  std::string out;
  out.reserve(bytes * 2);
  for (std::size_t n = 0; n < bytes; ++n) {
    const auto byte = static_cast<unsigned>((words_[n / 8] >> (8 * (n % 8))) & 0xFFU);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVector BitVector::from_hex(std::string_view hex, std::size_t size) {
  const std::size_t bytes = (size + 7) / 8;
  if (hex.size() != bytes * 2) {
    throw Error("bit string has " + std::to_string(hex.size()) + " hex digits, expected " +
                std::to_string(bytes * 2));
  }
  BitVector bits(size);
  for (std::size_t n = 0; n < bytes; ++n) {
    const int hi = hex_value(hex[2 * n]);
    const int lo = hex_value(hex[2 * n + 1]);
    if (hi < 0 || lo < 0) throw Error("invalid hex digit in bit string");
    const auto byte = static_cast<std::uint64_t>((hi << 4) | lo);
    bits.words_[n / 8] |= byte << (8 * (n % 8));
  }
  if (size % 64 != 0 && !bits.words_.empty() &&
      (bits.words_.back() >> (size % 64)) != 0) {
    throw Error("bit string sets bits beyond its declared length");
  }
  return bits;
}

std::size_t hamming(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) {
    throw Error("bit length mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()));
  }
  return static_cast<std::size_t>(simd::active_kernels().xor_popcount(a.words(), b.words()));
}

BitVector bitwise_xor(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw Error("bit length mismatch in xor");
  BitVector out(a.size());
  simd::active_kernels().xor_words(a.words(), b.words(), out.words());
  return out;
}

}  // namespace dvlae
