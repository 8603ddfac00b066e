#pragma once

#include <cstddef>
#include <span>

namespace ptx {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Standard error of the mean; 0 for fewer than two samples.
  double stderr_mean = 0.0;
};

Summary summarize(std::span<const double> values);

struct PairedTest {
  std::size_t n = 0;
  double mean_diff = 0.0;
  double sd_diff = 0.0;
  double t = 0.0;
  /// One-sided p-value for H1: mean(a - b) > 0.
  double p_value = 1.0;
};

/// Paired Student t-test on a[i] - b[i]. Throws std::invalid_argument on
/// length mismatch or fewer than two pairs. With zero variance the p-value
/// is 0 for a positive mean difference and 1 otherwise.
PairedTest paired_t_test_greater(std::span<const double> a, std::span<const double> b);

}  // namespace ptx
