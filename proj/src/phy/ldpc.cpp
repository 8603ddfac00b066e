#include "ptx/phy/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "ptx/corpus.hpp"

namespace ptx::phy {

namespace {

std::size_t read_count(std::istream& in, const char* what) {
  long long v = -1;
  if (!(in >> v) || v < 0) throw std::runtime_error(std::string("alist: cannot read ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

LdpcCode LdpcCode::from_alist(std::istream& in) {
  const std::size_t n = read_count(in, "n");
  const std::size_t m = read_count(in, "m");
  const std::size_t max_col = read_count(in, "max column degree");
  const std::size_t max_row = read_count(in, "max row degree");
  std::vector<std::size_t> col_deg(n), row_deg(m);
  for (auto& d : col_deg) d = read_count(in, "column degree");
  for (auto& d : row_deg) d = read_count(in, "row degree");
  // Column lists are redundant with the row lists; read and skip them.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < max_col; ++j) read_count(in, "column entry");
  }
  std::vector<std::vector<std::uint32_t>> checks(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < max_row; ++j) {
      const std::size_t v = read_count(in, "row entry");
      if (v == 0) continue;  // zero padding
      if (v > n) throw std::runtime_error("alist: variable index out of range");
      checks[r].push_back(static_cast<std::uint32_t>(v - 1));
    }
    if (checks[r].size() != row_deg[r]) throw std::runtime_error("alist: row degree mismatch");
  }
  return from_checks(n, std::move(checks));
}

LdpcCode LdpcCode::from_alist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parity-check file " + path.string());
  return from_alist(in);
}

LdpcCode LdpcCode::from_checks(std::size_t n, std::vector<std::vector<std::uint32_t>> checks) {
  if (n == 0 || checks.empty()) throw std::invalid_argument("empty parity-check matrix");
  LdpcCode code;
  code.n_ = n;
  for (auto& c : checks) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (auto v : c) {
      if (v >= n) throw std::invalid_argument("variable index out of range");
    }
  }
  code.checks_ = std::move(checks);
  code.prepare();
  return code;
}

void LdpcCode::prepare() {
  const std::size_t m = checks_.size();
  const std::size_t words = (n_ + 63) / 64;
  std::vector<std::vector<std::uint64_t>> h(m, std::vector<std::uint64_t>(words, 0));
  for (std::size_t r = 0; r < m; ++r) {
    for (auto v : checks_[r]) h[r][v / 64] |= std::uint64_t{1} << (v % 64);
  }

  // Reduced row echelon form over GF(2).
  std::vector<std::uint32_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n_ && rank < m; ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    std::size_t p = rank;
    while (p < m && !(h[p][w] & bit)) ++p;
    if (p == m) continue;
    std::swap(h[p], h[rank]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r != rank && (h[r][w] & bit)) {
        for (std::size_t i = 0; i < words; ++i) h[r][i] ^= h[rank][i];
      }
    }
    pivot_col.push_back(static_cast<std::uint32_t>(c));
    ++rank;
  }

  std::vector<bool> is_pivot(n_, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  info_positions_.clear();
  for (std::uint32_t c = 0; c < n_; ++c) {
    if (!is_pivot[c]) info_positions_.push_back(c);
  }
  parity_positions_ = pivot_col;

  const std::size_t k = info_positions_.size();
  const std::size_t kw = (k + 63) / 64;
  parity_rows_.assign(rank, std::vector<std::uint64_t>(kw, 0));
  for (std::size_t r = 0; r < rank; ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto c = info_positions_[j];
      if (h[r][c / 64] & (std::uint64_t{1} << (c % 64))) {
        parity_rows_[r][j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }

  edge_var_.clear();
  check_offset_.assign(1, 0);
  var_edges_.assign(n_, {});
  for (const auto& c : checks_) {
    for (auto v : c) {
      var_edges_[v].push_back(static_cast<std::uint32_t>(edge_var_.size()));
      edge_var_.push_back(v);
    }
    check_offset_.push_back(static_cast<std::uint32_t>(edge_var_.size()));
  }
}

BitVector LdpcCode::encode(std::span<const std::uint8_t> message) const {
  if (message.size() != k()) throw std::invalid_argument("message length must equal k");
  const std::size_t kw = (k() + 63) / 64;
  std::vector<std::uint64_t> packed(kw, 0);
  for (std::size_t j = 0; j < message.size(); ++j) {
    if (message[j] & 1u) packed[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  BitVector cw(n_, 0);
  for (std::size_t j = 0; j < info_positions_.size(); ++j) cw[info_positions_[j]] = message[j] & 1u;
  for (std::size_t r = 0; r < parity_positions_.size(); ++r) {
    unsigned acc = 0;
    for (std::size_t i = 0; i < kw; ++i) acc += static_cast<unsigned>(std::popcount(packed[i] & parity_rows_[r][i]));
    cw[parity_positions_[r]] = static_cast<std::uint8_t>(acc & 1u);
  }
  return cw;
}

bool LdpcCode::satisfies_checks(std::span<const std::uint8_t> codeword) const {
  if (codeword.size() != n_) return false;
  for (const auto& c : checks_) {
    unsigned acc = 0;
    for (auto v : c) acc ^= codeword[v] & 1u;
    if (acc) return false;
  }
  return true;
}

BitVector LdpcCode::extract_message(std::span<const std::uint8_t> codeword) const {
  BitVector msg(info_positions_.size());
  for (std::size_t j = 0; j < msg.size(); ++j) msg[j] = codeword[info_positions_[j]];
  return msg;
}

template <typename Scalar>
DecodeResult<Scalar> LdpcCode::decode(const LlrVector<Scalar>& llr_in, unsigned max_iterations) const {
  if (static_cast<std::size_t>(llr_in.size()) != n_) {
    throw std::invalid_argument("LLR count must equal the code length");
  }
  const Scalar cap = static_cast<Scalar>(kLlrCap);
  const LlrVector<Scalar> llr = llr_in.cwiseMax(-cap).cwiseMin(cap);
  const Scalar one_minus = Scalar(1) - Scalar(4) * std::numeric_limits<Scalar>::epsilon();

  DecodeResult<Scalar> out;
  out.codeword.resize(n_);
  for (std::size_t v = 0; v < n_; ++v) out.codeword[v] = llr[static_cast<Eigen::Index>(v)] < 0 ? 1 : 0;
  if (satisfies_checks(out.codeword)) {
    out.converged = true;
    out.message = extract_message(out.codeword);
    return out;
  }

  const std::size_t edges = edge_var_.size();
  std::vector<Scalar> q(edges), r(edges, Scalar(0)), t;
  for (std::size_t e = 0; e < edges; ++e) q[e] = llr[edge_var_[e]];
  std::vector<Scalar> fwd, bwd;

  for (unsigned it = 1; it <= max_iterations; ++it) {
    for (std::size_t c = 0; c + 1 < check_offset_.size(); ++c) {
      const std::size_t lo = check_offset_[c], hi = check_offset_[c + 1], deg = hi - lo;
      t.resize(deg);
      fwd.resize(deg + 1);
      bwd.resize(deg + 1);
      for (std::size_t i = 0; i < deg; ++i) t[i] = std::tanh(q[lo + i] / Scalar(2));
      fwd[0] = Scalar(1);
      for (std::size_t i = 0; i < deg; ++i) fwd[i + 1] = fwd[i] * t[i];
      bwd[deg] = Scalar(1);
      for (std::size_t i = deg; i-- > 0;) bwd[i] = bwd[i + 1] * t[i];
      for (std::size_t i = 0; i < deg; ++i) {
        const Scalar prod = std::clamp(fwd[i] * bwd[i + 1], -one_minus, one_minus);
        r[lo + i] = std::clamp(Scalar(2) * std::atanh(prod), -cap, cap);
      }
    }
    for (std::size_t v = 0; v < n_; ++v) {
      Scalar total = llr[static_cast<Eigen::Index>(v)];
      for (auto e : var_edges_[v]) total += r[e];
      for (auto e : var_edges_[v]) q[e] = std::clamp(total - r[e], -cap, cap);
      out.codeword[v] = total < 0 ? 1 : 0;
    }
    out.iterations = it;
    if (satisfies_checks(out.codeword)) {
      out.converged = true;
      break;
    }
  }
  out.message = extract_message(out.codeword);
  return out;
}

template DecodeResult<float> LdpcCode::decode(const LlrVector<float>&, unsigned) const;
template DecodeResult<double> LdpcCode::decode(const LlrVector<double>&, unsigned) const;

const LdpcCode& default_code() {
  static const LdpcCode code = LdpcCode::from_alist(data_dir() / "ldpc_648_r12.alist");
  return code;
}

}  // namespace ptx::phy
