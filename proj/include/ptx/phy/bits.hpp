#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ptx::phy {

/// One bit per element, values 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// Appends fixed-width fields most-significant bit first.
class BitWriter {
 public:
  void put(std::uint64_t value, unsigned width);
  void append(std::span<const std::uint8_t> bits) { bits_.insert(bits_.end(), bits.begin(), bits.end()); }
  void pad_to_multiple(std::size_t block);

  std::size_t size() const noexcept { return bits_.size(); }
  const BitVector& bits() const& noexcept { return bits_; }
  BitVector bits() && noexcept { return std::move(bits_); }

 private:
  BitVector bits_;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bits) : bits_(bits) {}

  /// Throws std::out_of_range when fewer than `width` bits remain.
  std::uint64_t get(unsigned width);
  std::size_t remaining() const noexcept { return bits_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

inline constexpr unsigned kCharBits = 7;

/// 7-bit fixed-length source code, MSB first. Throws UnsupportedCharacter.
BitVector source_encode(std::string_view chars);

/// Inverse of source_encode; trailing bits that do not fill a character are
/// ignored. Throws UnsupportedCharacter on codes outside the printable set.
std::string source_decode(std::span<const std::uint8_t> bits);

std::string to_string(std::span<const std::uint8_t> bits);

}  // namespace ptx::phy
