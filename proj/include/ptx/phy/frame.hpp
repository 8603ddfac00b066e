#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptx/phy/bits.hpp"

namespace ptx::phy {

/// 32-bit frame header, fields in wire order, MSB first:
///
///   version:4 | window_count:12 | keep_ratio_code:8 | index_bits:4 |
///   tail_unpunctured:1 | reserved:3
///
/// followed by window_count filter indices of index_bits each, then the
/// payload as 7-bit character codes, then zero padding to the code block size.
struct FrameHeader {
  static constexpr unsigned kVersion = 1;
  static constexpr unsigned kBits = 32;
  static constexpr std::size_t kMaxWindows = (1u << 12) - 1;

  unsigned version = kVersion;
  unsigned window_count = 0;
  unsigned keep_ratio_code = 255;
  unsigned index_bits = 0;
  bool tail_unpunctured = false;
  unsigned reserved = 0;

  /// keep ratio quantized to round(ratio * 255).
  static unsigned encode_keep_ratio(double keep_ratio);
  double keep_ratio() const noexcept { return keep_ratio_code / 255.0; }

  bool operator==(const FrameHeader&) const = default;
};

struct Frame {
  FrameHeader header;
  std::vector<std::uint32_t> filter_indices;
  std::string payload;

  /// Bits before padding.
  std::size_t bit_length() const noexcept;

  bool operator==(const Frame&) const = default;
};

/// Throws std::invalid_argument when a field does not fit its width, and
/// UnsupportedCharacter for payload characters outside the 7-bit set.
BitVector serialize(const Frame& frame, std::size_t block_bits = 0);

enum class ParseMode {
  /// Any inconsistency throws BrokenFrame.
  Strict,
  /// Best effort for noisy input: invalid codes become '?', missing index
  /// bits read as zero, version is not checked.
  Lenient,
};

/// Trailing all-zero character codes are padding and are dropped.
Frame deserialize(std::span<const std::uint8_t> bits, ParseMode mode = ParseMode::Strict);

/// Substitute for undecodable characters in lenient parsing.
inline constexpr char kInvalidCharacter = '?';

}  // namespace ptx::phy
