#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ptx/phy/bits.hpp"

namespace ptx::phy {

template <typename Scalar>
using LlrVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Positive LLR favours bit 0. Magnitudes are clipped to this value.
inline constexpr double kLlrCap = 1e3;

template <typename Scalar>
struct DecodeResult {
  BitVector message;
  BitVector codeword;
  bool converged = false;
  /// 0 when the channel hard decisions already satisfied every check.
  unsigned iterations = 0;
};

/// Binary LDPC code given by a sparse parity-check matrix H (m x n).
/// Encoding is systematic: message bits occupy the columns left without a
/// pivot after GF(2) elimination of H, parity bits fill the pivot columns.
class LdpcCode {
 public:
  static LdpcCode from_alist(std::istream& in);
  static LdpcCode from_alist(const std::filesystem::path& path);
  /// `checks[r]` lists the variable indices of check r.
  static LdpcCode from_checks(std::size_t n, std::vector<std::vector<std::uint32_t>> checks);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return checks_.size(); }
  std::size_t k() const noexcept { return info_positions_.size(); }
  double rate() const noexcept { return static_cast<double>(k()) / static_cast<double>(n_); }

  const std::vector<std::vector<std::uint32_t>>& checks() const noexcept { return checks_; }
  /// Codeword positions carrying message bits, ascending.
  const std::vector<std::uint32_t>& info_positions() const noexcept { return info_positions_; }
  /// Codeword positions carrying parity bits, ascending.
  const std::vector<std::uint32_t>& parity_positions() const noexcept { return parity_positions_; }

  /// Throws std::invalid_argument unless message.size() == k().
  BitVector encode(std::span<const std::uint8_t> message) const;

  /// True when H c^T = 0.
  bool satisfies_checks(std::span<const std::uint8_t> codeword) const;

  BitVector extract_message(std::span<const std::uint8_t> codeword) const;

  /// Sum-product belief propagation with early exit on a zero syndrome.
  template <typename Scalar>
  DecodeResult<Scalar> decode(const LlrVector<Scalar>& llr, unsigned max_iterations = 50) const;

 private:
  void prepare();

  std::size_t n_ = 0;
  std::vector<std::vector<std::uint32_t>> checks_;
  std::vector<std::uint32_t> info_positions_;
  std::vector<std::uint32_t> parity_positions_;
  // For each parity position, the message-bit mask (over info_positions_
  // order) whose parity gives that bit.
  std::vector<std::vector<std::uint64_t>> parity_rows_;

  // Edge layout for the decoder: edges grouped by check.
  std::vector<std::uint32_t> edge_var_;
  std::vector<std::uint32_t> check_offset_;
  std::vector<std::vector<std::uint32_t>> var_edges_;
};

extern template DecodeResult<float> LdpcCode::decode(const LlrVector<float>&, unsigned) const;
extern template DecodeResult<double> LdpcCode::decode(const LlrVector<double>&, unsigned) const;

/// The bundled rate-1/2, n = 648, (3,6)-regular code.
const LdpcCode& default_code();

}  // namespace ptx::phy
