#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

#include <Eigen/Core>

#include "ptx/phy/ldpc.hpp"
#include "ptx/rng.hpp"

namespace ptx::phy {

template <typename Scalar>
using SymbolVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// AWGN channel y = h x + n. snr_db is Es/N0 per QPSK symbol with unit
/// symbol energy, so the total complex noise variance is 10^(-snr_db/10).
/// An infinite snr_db gives a noiseless channel.
struct ChannelConfig {
  double snr_db = std::numeric_limits<double>::infinity();
  std::complex<double> h{1.0, 0.0};
  std::uint64_t noise_seed = 0;

  double noise_variance() const noexcept {
    return std::isinf(snr_db) && snr_db > 0 ? 0.0 : std::pow(10.0, -snr_db / 10.0);
  }
};

/// Es/N0 for a given Eb/N0 with `bits_per_symbol` coded bits per symbol.
inline double esn0_from_ebn0(double ebn0_db, double bits_per_symbol = 2.0) {
  return ebn0_db + 10.0 * std::log10(bits_per_symbol);
}

/// Gray-mapped unit-energy QPSK: (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
/// An odd trailing bit is paired with a zero.
template <typename Scalar = double>
SymbolVector<Scalar> qpsk_modulate(std::span<const std::uint8_t> bits) {
  const Scalar a = Scalar(1) / std::sqrt(Scalar(2));
  const Eigen::Index n = static_cast<Eigen::Index>((bits.size() + 1) / 2);
  SymbolVector<Scalar> x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto b0 = bits[2 * i] & 1u;
    const auto b1 = static_cast<std::size_t>(2 * i + 1) < bits.size() ? (bits[2 * i + 1] & 1u) : 0u;
    x[i] = {b0 ? -a : a, b1 ? -a : a};
  }
  return x;
}

/// y = h x + n with n circularly-symmetric Gaussian, variance sigma^2 / 2 per
/// real dimension, drawn from the noise stream keyed by cfg.noise_seed.
template <typename Derived>
auto awgn(const Eigen::MatrixBase<Derived>& x, const ChannelConfig& cfg) {
  using Complex = typename Derived::Scalar;
  using Scalar = typename Complex::value_type;
  SymbolVector<Scalar> y = x * Complex(static_cast<Scalar>(cfg.h.real()), static_cast<Scalar>(cfg.h.imag()));
  const double var = cfg.noise_variance();
  if (var == 0.0) return y;
  auto rng = make_engine({stream::noise, cfg.noise_seed});
  std::normal_distribution<double> gauss(0.0, std::sqrt(var / 2.0));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    y[i] += Complex(static_cast<Scalar>(re), static_cast<Scalar>(im));
  }
  return y;
}

/// Per-bit LLRs (positive favours 0) for the Gray map above, two per symbol:
/// LLR = 2 sqrt(2) Re/Im(conj(h) y) / sigma^2. With sigma^2 = 0 the LLRs are
/// hard decisions of magnitude kLlrCap.
template <typename Derived>
auto qpsk_llr(const Eigen::MatrixBase<Derived>& y, double noise_variance,
              std::complex<double> h = {1.0, 0.0}) {
  using Complex = typename Derived::Scalar;
  using Scalar = typename Complex::value_type;
  const Complex hc(static_cast<Scalar>(h.real()), static_cast<Scalar>(-h.imag()));
  const Scalar cap = static_cast<Scalar>(kLlrCap);
  const Scalar gain = noise_variance > 0.0 ? static_cast<Scalar>(2.0 * std::sqrt(2.0) / noise_variance) : Scalar(0);
  LlrVector<Scalar> llr(2 * y.size());
  auto one = [&](Scalar v) {
    if (noise_variance <= 0.0) return v > 0 ? cap : (v < 0 ? -cap : Scalar(0));
    return std::clamp(gain * v, -cap, cap);
  };
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Complex z = hc * y[i];
    llr[2 * i] = one(z.real());
    llr[2 * i + 1] = one(z.imag());
  }
  return llr;
}

/// Hard decisions of an LLR vector (negative -> 1).
template <typename Derived>
BitVector hard_decision(const Eigen::MatrixBase<Derived>& llr) {
  BitVector bits(static_cast<std::size_t>(llr.size()));
  for (Eigen::Index i = 0; i < llr.size(); ++i) bits[static_cast<std::size_t>(i)] = llr[i] < 0 ? 1 : 0;
  return bits;
}

}  // namespace ptx::phy
