#pragma once

#include <cstddef>
#include <span>

namespace rmstperm {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, Wichura's AS241 (PPND16, ~1e-15 accurate).
/// Throws invalid_input_error outside (0, 1).
double normal_quantile(double p);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // denominator n - 1
  std::size_t n = 0;
};

MeanVariance mean_variance(std::span<const double> values);

}  // namespace rmstperm
