#include "entdiff/slope.hpp"

#include <limits>

#include "entdiff/errors.hpp"
#include "entdiff/int128.hpp"

namespace entdiff {

namespace {

std::int64_t narrow(Int128 value) {
  if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
    throw OverflowError("best-fit line result exceeds int64");
  }
  return static_cast<std::int64_t>(value);
}

}  // namespace

IntegerLineFit best_fit_line(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys) {
  if (xs.size() != ys.size()) throw InvalidParameterError("best_fit_line: xs and ys differ in length");
  if (xs.size() < 2) throw InvalidParameterError("best_fit_line: at least two points are required");

  const auto length = static_cast<Int128>(xs.size());
  Int128 sum_x = 0, sum_y = 0, sum_xy = 0, sum_xx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum_x += xs[i];
    sum_y += ys[i];
    sum_xy += static_cast<Int128>(xs[i]) * ys[i];
    sum_xx += static_cast<Int128>(xs[i]) * xs[i];
  }
  // C++ integer division truncates toward zero, matching int(a / b).
  const Int128 mean_x = sum_x / length;
  const Int128 mean_y = sum_y / length;
  const Int128 mean_xy = sum_xy / length;
  const Int128 mean_xx = sum_xx / length;

  const Int128 denominator = mean_x * mean_x - mean_xx;
  if (denominator == 0) throw DegenerateFitError();
  const std::int64_t slope = narrow((mean_x * mean_y - mean_xy) / denominator);
  return {slope, narrow(mean_y - static_cast<Int128>(slope) * mean_x)};
}

RealLineFit least_squares_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidParameterError("least_squares_fit: xs and ys differ in length");
  if (xs.size() < 2) throw InvalidParameterError("least_squares_fit: at least two points are required");
  const auto length = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= length;
  mean_y /= length;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    sxy += dx * (ys[i] - mean_y);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw DegenerateFitError();
  const double slope = sxy / sxx;
  return {slope, mean_y - slope * mean_x};
}

}  // namespace entdiff
