#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "ptx/phy/bits.hpp"
#include "ptx/phy/channel.hpp"
#include "ptx/phy/ldpc.hpp"

namespace ptx::phy {

/// How a frame was spread over coded blocks. Known to the receiver out of
/// band (control plane) and assumed error free.
struct TransmissionFormat {
  std::size_t blocks = 0;
  /// Frame bits carried, including zero padding in full-codeword mode.
  std::size_t info_bits = 0;
  std::size_t symbols = 0;

  bool operator==(const TransmissionFormat&) const = default;
};

/// Without a budget every block is a whole codeword and the frame is padded
/// to a multiple of k, so symbols = blocks * n / 2. With a budget of S
/// symbols the padding is shortened (known zeros, never sent) and each
/// block's circular buffer (message bits, then parity) is read out to an
/// equal share of the 2S coded bits: repetition when the share is larger
/// than the buffer, puncturing when it is smaller.
struct Encoded {
  BitVector coded;
  TransmissionFormat format;
};

Encoded encode_frame(std::span<const std::uint8_t> frame_bits, const LdpcCode& code,
                     std::optional<std::size_t> symbol_budget = std::nullopt);

struct LinkStats {
  std::size_t blocks = 0;
  std::size_t failed_blocks = 0;
  unsigned iterations = 0;

  bool all_converged() const noexcept { return failed_blocks == 0; }
};

struct Decoded {
  BitVector bits;
  LinkStats stats;
};

/// Combines repeated LLRs, restores shortened positions and decodes every block.
Decoded decode_frame(const LlrVector<double>& llr, const TransmissionFormat& format,
                     const LdpcCode& code, unsigned max_iterations = 50);

struct LinkResult {
  Decoded decoded;
  TransmissionFormat format;
};

/// encode -> QPSK -> AWGN -> LLR -> decode.
LinkResult simulate_link(std::span<const std::uint8_t> frame_bits, const LdpcCode& code,
                         const ChannelConfig& channel,
                         std::optional<std::size_t> symbol_budget = std::nullopt,
                         unsigned max_iterations = 50);

/// Symbols used in full-codeword mode: ceil((padded frame bits / R) / 2).
std::size_t full_codeword_symbols(std::size_t frame_bits, const LdpcCode& code);

}  // namespace ptx::phy
