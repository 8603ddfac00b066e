#include "ptx/phy/frame.hpp"

#include <cmath>
#include <stdexcept>

#include "ptx/corpus.hpp"
#include "ptx/error.hpp"

namespace ptx::phy {

unsigned FrameHeader::encode_keep_ratio(double keep_ratio) {
  if (!(keep_ratio >= 0.0 && keep_ratio <= 1.0)) throw std::invalid_argument("keep ratio out of range");
  return static_cast<unsigned>(std::lround(keep_ratio * 255.0));
}

std::size_t Frame::bit_length() const noexcept {
  return FrameHeader::kBits + filter_indices.size() * header.index_bits + payload.size() * kCharBits;
}

namespace {

void check_width(std::uint64_t v, unsigned width, const char* field) {
  if (width < 64 && (v >> width) != 0) {
    throw std::invalid_argument(std::string("frame field does not fit: ") + field);
  }
}

}  // namespace

BitVector serialize(const Frame& frame, std::size_t block_bits) {
  const auto& h = frame.header;
  check_width(h.version, 4, "version");
  check_width(h.window_count, 12, "window_count");
  check_width(h.keep_ratio_code, 8, "keep_ratio_code");
  check_width(h.index_bits, 4, "index_bits");
  check_width(h.reserved, 3, "reserved");
  if (frame.filter_indices.size() != h.window_count) {
    throw std::invalid_argument("one filter index per window is required");
  }

  BitWriter w;
  w.put(h.version, 4);
  w.put(h.window_count, 12);
  w.put(h.keep_ratio_code, 8);
  w.put(h.index_bits, 4);
  w.put(h.tail_unpunctured ? 1 : 0, 1);
  w.put(h.reserved, 3);
  for (auto idx : frame.filter_indices) {
    check_width(idx, h.index_bits, "filter index");
    w.put(idx, h.index_bits);
  }
  for (std::size_t i = 0; i < frame.payload.size(); ++i) {
    const char c = frame.payload[i];
    if (!is_supported_char(c)) throw UnsupportedCharacter(i, static_cast<unsigned char>(c));
    w.put(static_cast<unsigned char>(c), kCharBits);
  }
  w.pad_to_multiple(block_bits);
  return std::move(w).bits();
}

Frame deserialize(std::span<const std::uint8_t> bits, ParseMode mode) {
  const bool strict = mode == ParseMode::Strict;
  if (bits.size() < FrameHeader::kBits) {
    throw BrokenFrame("frame shorter than its header", FrameHeader::kBits, bits.size());
  }
  BitReader r(bits);
  Frame f;
  auto& h = f.header;
  h.version = static_cast<unsigned>(r.get(4));
  h.window_count = static_cast<unsigned>(r.get(12));
  h.keep_ratio_code = static_cast<unsigned>(r.get(8));
  h.index_bits = static_cast<unsigned>(r.get(4));
  h.tail_unpunctured = r.get(1) != 0;
  h.reserved = static_cast<unsigned>(r.get(3));
  if (strict && h.version != FrameHeader::kVersion) {
    throw BrokenFrame("unknown frame version", FrameHeader::kVersion, h.version);
  }

  const std::size_t index_total = static_cast<std::size_t>(h.window_count) * h.index_bits;
  if (strict && r.remaining() < index_total) {
    throw BrokenFrame("truncated filter indices", index_total, r.remaining());
  }
  f.filter_indices.reserve(h.window_count);
  for (unsigned i = 0; i < h.window_count; ++i) {
    f.filter_indices.push_back(r.remaining() >= h.index_bits ? static_cast<std::uint32_t>(r.get(h.index_bits)) : 0u);
  }

  std::vector<unsigned> codes;
  codes.reserve(r.remaining() / kCharBits);
  while (r.remaining() >= kCharBits) codes.push_back(static_cast<unsigned>(r.get(kCharBits)));
  while (!codes.empty() && codes.back() == 0) codes.pop_back();
  f.payload.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const char c = static_cast<char>(codes[i]);
    if (is_supported_char(c)) {
      f.payload.push_back(c);
    } else if (strict) {
      throw BrokenFrame("invalid character code in payload", 0, codes[i]);
    } else {
      f.payload.push_back(kInvalidCharacter);
    }
  }
  return f;
}

}  // namespace ptx::phy
