#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dvlae {

/// Fixed-length packed bit array. Bit b lives in word b / 64 at position
/// b % 64 (LSB first). Unused high bits of the last word are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  bool test(std::size_t bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1U; }
  void set(std::size_t bit, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (bit & 63);
    if (value) {
      words_[bit >> 6] |= mask;
    } else {
      words_[bit >> 6] &= ~mask;
    }
  }

  std::size_t count() const noexcept;
  bool none() const noexcept { return count() == 0; }

  /// Hex encoding: bytes in ascending bit order (byte n holds bits 8n..8n+7,
  /// bit 8n least significant), two lowercase digits per byte, high nibble
  /// first. Length is 2 * ceil(size / 8).
  std::string to_hex() const;
  static BitVector from_hex(std::string_view hex, std::size_t size);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// popcount(a ^ b); sizes must match.
std::size_t hamming(const BitVector& a, const BitVector& b);

/// a ^ b; sizes must match.
BitVector bitwise_xor(const BitVector& a, const BitVector& b);

}  // namespace dvlae
