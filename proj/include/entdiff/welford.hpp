#pragma once

#include <cstdint>

#include "entdiff/int128.hpp"

namespace entdiff {

// Running mean and sum of squared deviations (m2) of the best-fit slopes,
// updated with Welford's recurrence
//
//   count += 1
//   mean_new = mean_old + (x - mean_old) / count
//   m2 += (x - mean_new) * (x - mean_old)
//
// so that m2 / count is the population variance of everything ingested.

/// Integer form. The mean update truncates toward zero; m2 is exact in 128
/// bits and overflow-checked.
class IntegerSlopeStats {
 public:
  void update(std::int64_t slope);

  std::int64_t count() const noexcept { return count_; }
  std::int64_t mean() const noexcept { return mean_; }
  Int128 m2() const noexcept { return m2_; }
  /// m2 / count as a double; 0 when empty.
  double variance() const noexcept;

 private:
  std::int64_t count_ = 0;
  std::int64_t mean_ = 0;
  Int128 m2_ = 0;
};

/// Floating-point form. Samples are taken relative to the first one so the
/// recurrence never subtracts two large nearly-equal numbers.
class RealSlopeStats {
 public:
  void update(double slope);

  std::int64_t count() const noexcept { return count_; }
  double mean() const noexcept { return origin_ + shifted_mean_; }
  double m2() const noexcept { return m2_; }
  double variance() const noexcept { return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_); }

 private:
  std::int64_t count_ = 0;
  double origin_ = 0.0;
  double shifted_mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace entdiff
