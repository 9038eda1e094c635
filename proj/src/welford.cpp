#include "entdiff/welford.hpp"

#include "entdiff/errors.hpp"

namespace entdiff {

void IntegerSlopeStats::update(std::int64_t slope) {
  ++count_;
  const std::int64_t previous = mean_;
  mean_ = static_cast<std::int64_t>(mean_ + (static_cast<Int128>(slope) - mean_) / count_);
  Int128 term = 0;
  Int128 updated = 0;
  if (__builtin_mul_overflow(static_cast<Int128>(slope) - mean_, static_cast<Int128>(slope) - previous, &term) ||
      __builtin_add_overflow(m2_, term, &updated)) {
    throw OverflowError("slope variance accumulator overflowed 128 bits");
  }
  m2_ = updated;
}

double IntegerSlopeStats::variance() const noexcept {
  return count_ == 0 ? 0.0 : static_cast<double>(m2_) / static_cast<double>(count_);
}

void RealSlopeStats::update(double slope) {
  if (count_ == 0) origin_ = slope;
  ++count_;
  const double x = slope - origin_;
  const double delta = x - shifted_mean_;
  shifted_mean_ += delta / static_cast<double>(count_);
  m2_ += (x - shifted_mean_) * delta;
}

}  // namespace entdiff
