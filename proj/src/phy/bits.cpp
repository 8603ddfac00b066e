#include "ptx/phy/bits.hpp"

#include <stdexcept>

#include "ptx/corpus.hpp"
#include "ptx/error.hpp"

namespace ptx::phy {

void BitWriter::put(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

void BitWriter::pad_to_multiple(std::size_t block) {
  if (block == 0) return;
  const std::size_t rem = bits_.size() % block;
  if (rem != 0) bits_.resize(bits_.size() + (block - rem), 0);
}

std::uint64_t BitReader::get(unsigned width) {
  if (remaining() < width) throw std::out_of_range("bit reader exhausted");
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | (bits_[pos_++] & 1u);
  return v;
}

BitVector source_encode(std::string_view chars) {
  BitWriter w;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (!is_supported_char(chars[i])) {
      throw UnsupportedCharacter(i, static_cast<unsigned char>(chars[i]));
    }
    w.put(static_cast<unsigned char>(chars[i]), kCharBits);
  }
  return std::move(w).bits();
}

std::string source_decode(std::span<const std::uint8_t> bits) {
  BitReader r(bits);
  std::string out;
  out.reserve(bits.size() / kCharBits);
  while (r.remaining() >= kCharBits) {
    const auto code = static_cast<char>(r.get(kCharBits));
    if (!is_supported_char(code)) throw UnsupportedCharacter(out.size(), static_cast<unsigned char>(code));
    out.push_back(code);
  }
  return out;
}

std::string to_string(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace ptx::phy
