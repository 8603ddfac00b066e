#include "ptx/phy/link.hpp"

#include <stdexcept>
#include <vector>

namespace ptx::phy {

namespace {

std::size_t blocks_for(std::size_t bits, std::size_t k) { return bits == 0 ? 1 : (bits + k - 1) / k; }

// Codeword positions in transmission order for a block carrying `info` message bits.
std::vector<std::uint32_t> circular_buffer(const LdpcCode& code, std::size_t info) {
  std::vector<std::uint32_t> buf(code.info_positions().begin(),
                                 code.info_positions().begin() + static_cast<std::ptrdiff_t>(info));
  buf.insert(buf.end(), code.parity_positions().begin(), code.parity_positions().end());
  return buf;
}

std::size_t block_info(const TransmissionFormat& f, std::size_t b, std::size_t k) {
  const std::size_t start = b * k;
  return f.info_bits > start ? std::min(k, f.info_bits - start) : 0;
}

std::size_t block_share(std::size_t total, std::size_t blocks, std::size_t b) {
  return total / blocks + (b < total % blocks ? 1 : 0);
}

}  // namespace

std::size_t full_codeword_symbols(std::size_t frame_bits, const LdpcCode& code) {
  return (blocks_for(frame_bits, code.k()) * code.n() + 1) / 2;
}

Encoded encode_frame(std::span<const std::uint8_t> frame_bits, const LdpcCode& code,
                     std::optional<std::size_t> symbol_budget) {
  const std::size_t k = code.k();
  Encoded out;
  auto& f = out.format;
  f.blocks = blocks_for(frame_bits.size(), k);
  if (symbol_budget) {
    if (*symbol_budget == 0) throw std::invalid_argument("symbol budget must be positive");
    f.info_bits = frame_bits.size();
    f.symbols = *symbol_budget;
  } else {
    f.info_bits = f.blocks * k;
    f.symbols = full_codeword_symbols(frame_bits.size(), code);
  }
  const std::size_t total = 2 * f.symbols;
  out.coded.reserve(total);

  BitVector msg(k);
  for (std::size_t b = 0; b < f.blocks; ++b) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t i = b * k + j;
      msg[j] = i < frame_bits.size() ? frame_bits[i] : 0;
    }
    const auto cw = code.encode(msg);
    const auto buf = circular_buffer(code, block_info(f, b, k));
    const std::size_t share = block_share(total, f.blocks, b);
    for (std::size_t e = 0; e < share; ++e) out.coded.push_back(cw[buf[e % buf.size()]]);
  }
  return out;
}

Decoded decode_frame(const LlrVector<double>& llr, const TransmissionFormat& f, const LdpcCode& code,
                     unsigned max_iterations) {
  const std::size_t total = 2 * f.symbols;
  if (static_cast<std::size_t>(llr.size()) < total) {
    throw std::invalid_argument("fewer LLRs than the transmission format declares");
  }
  const std::size_t k = code.k();
  Decoded out;
  out.bits.reserve(f.info_bits);
  out.stats.blocks = f.blocks;
  std::size_t offset = 0;
  for (std::size_t b = 0; b < f.blocks; ++b) {
    const std::size_t info = block_info(f, b, k);
    const auto buf = circular_buffer(code, info);
    LlrVector<double> acc = LlrVector<double>::Zero(static_cast<Eigen::Index>(code.n()));
    // Shortened message positions are known zeros.
    for (std::size_t j = info; j < k; ++j) acc[code.info_positions()[j]] = kLlrCap;
    const std::size_t share = block_share(total, f.blocks, b);
    for (std::size_t e = 0; e < share; ++e) {
      acc[buf[e % buf.size()]] += llr[static_cast<Eigen::Index>(offset + e)];
    }
    offset += share;
    const auto res = code.decode(acc, max_iterations);
    if (!res.converged) ++out.stats.failed_blocks;
    out.stats.iterations += res.iterations;
    out.bits.insert(out.bits.end(), res.message.begin(), res.message.begin() + static_cast<std::ptrdiff_t>(info));
  }
  return out;
}

LinkResult simulate_link(std::span<const std::uint8_t> frame_bits, const LdpcCode& code,
                         const ChannelConfig& channel, std::optional<std::size_t> symbol_budget,
                         unsigned max_iterations) {
  auto enc = encode_frame(frame_bits, code, symbol_budget);
  const auto x = qpsk_modulate<double>(enc.coded);
  const auto y = awgn(x, channel);
  const auto llr = qpsk_llr(y, channel.noise_variance(), channel.h);
  return {decode_frame(llr, enc.format, code, max_iterations), enc.format};
}

}  // namespace ptx::phy
