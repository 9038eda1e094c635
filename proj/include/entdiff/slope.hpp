#pragma once

#include <cstdint>
#include <span>

namespace entdiff {

struct IntegerLineFit {
  std::int64_t slope = 0;
  std::int64_t intercept = 0;
};

struct RealLineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line in integer arithmetic. Every mean is truncated toward
/// zero before use, in this order:
///
///   mean_x, mean_y, mean_xy, mean_xx = trunc(sum / len)
///   slope = trunc((mean_x * mean_y - mean_xy) / (mean_x^2 - mean_xx))
///
/// Throws DegenerateFitError when the truncated denominator is zero (always
/// the case for identical xs, and also for xs = 0..P-1 with P < 4), and
/// OverflowError when a result leaves int64.
IntegerLineFit best_fit_line(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys);

inline std::int64_t best_fit_slope(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys) {
  return best_fit_line(xs, ys).slope;
}

/// Ordinary least squares in floating point.
RealLineFit least_squares_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace entdiff
