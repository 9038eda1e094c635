#pragma once

#include <cstdint>
#include <string>

#include "entdiff/frequency_table.hpp"

namespace entdiff {

/// Shannon entropy in nats. Throws EmptyWindowError on an empty table.
double shannon(const FrequencyTable& table);

/// Renyi entropy of order `alpha` (alpha >= 0, alpha != 1), natural log.
/// Order 0 is the Hartley entropy ln(distinct).
double renyi(const FrequencyTable& table, double alpha);

/// Tsallis entropy (1 - sum p_i^q) / (q - 1); nonnegative for every q != 1.
double tsallis(const FrequencyTable& table, double q);

/// Integer-only Tsallis entropy scaled by `precision`:
///
///   floor(precision * (n^q - sum f_i^q) / ((q - 1) * n^q)),   n = table.total()
///
/// Evaluated exactly with arbitrary-width integers. The result lies in
/// [0, precision / (q - 1)]. Requires q >= 2 and precision >= 1.
std::int64_t tsallis_int_scaled(const FrequencyTable& table, int q, std::int64_t precision);

/// Same value restricted to 64-bit intermediates (n^q and sum f_i^q must fit in
/// int64). Throws OverflowError instead of wrapping.
std::int64_t tsallis_int_scaled_fixed(const FrequencyTable& table, int q, std::int64_t precision);

/// A configured entropy function. Parameters are validated at construction.
class EntropyMeasure {
 public:
  enum class Kind { shannon, renyi, tsallis, tsallis_int_scaled };

  static EntropyMeasure make_shannon();
  static EntropyMeasure make_renyi(double alpha);
  static EntropyMeasure make_tsallis(double q);
  static EntropyMeasure make_tsallis_int_scaled(int q, std::int64_t precision);

  Kind kind() const noexcept { return kind_; }
  /// alpha for Renyi, q for both Tsallis forms, 0 for Shannon.
  double parameter() const noexcept { return parameter_; }
  std::int64_t precision() const noexcept { return precision_; }
  bool integer_valued() const noexcept { return kind_ == Kind::tsallis_int_scaled; }

  /// Stable label, e.g. "tsallis-int(q=5,precision=1000000)".
  std::string name() const;

  /// Evaluates the measure; scaled-integer results are returned as double.
  double evaluate(const FrequencyTable& table) const;

  /// Exact scaled value. Only valid for Kind::tsallis_int_scaled.
  std::int64_t evaluate_scaled(const FrequencyTable& table) const;

 private:
  EntropyMeasure(Kind kind, double parameter, std::int64_t precision)
      : kind_(kind), parameter_(parameter), precision_(precision) {}

  Kind kind_;
  double parameter_;
  std::int64_t precision_;
};

}  // namespace entdiff
