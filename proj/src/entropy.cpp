#include "entdiff/entropy.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

#include "entdiff/errors.hpp"
#include "entdiff/int128.hpp"

namespace entdiff {

namespace {

void require_nonempty(const FrequencyTable& table) {
  if (table.empty()) throw EmptyWindowError();
}

void validate_scaled_args(int q, std::int64_t precision) {
  if (q < 2) throw InvalidParameterError("scaled Tsallis requires integer q >= 2");
  if (precision < 1) throw InvalidParameterError("scaled Tsallis precision must be >= 1");
}

// base^exp in int64, or nullopt when it would overflow.
std::optional<std::int64_t> checked_pow(std::uint64_t base, int exp) {
  if (base > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
  std::int64_t result = 1;
  const auto b = static_cast<std::int64_t>(base);
  for (int i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(result, b, &result)) return std::nullopt;
  }
  return result;
}

std::int64_t scaled_big(const FrequencyTable& table, int q, std::int64_t precision) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::pow;
  const cpp_int n_pow = pow(cpp_int(table.total()), static_cast<unsigned>(q));
  cpp_int sum = 0;
  for (const auto& [key, count] : table) sum += pow(cpp_int(count), static_cast<unsigned>(q));
  const cpp_int value = cpp_int(precision) * (n_pow - sum) / (cpp_int(q - 1) * n_pow);
  return value.convert_to<std::int64_t>();
}

}  // namespace

double shannon(const FrequencyTable& table) {
  require_nonempty(table);
  const double n = static_cast<double>(table.total());
  double sum = 0.0;
  for (const auto& [key, count] : table) {
    const double p = static_cast<double>(count) / n;
    sum -= p * std::log(p);
  }
  return sum;
}

double renyi(const FrequencyTable& table, double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0) throw InvalidParameterError("Renyi order must satisfy alpha >= 0, alpha != 1");
  require_nonempty(table);
  if (alpha == 0.0) return std::log(static_cast<double>(table.distinct()));
  const double n = static_cast<double>(table.total());
  double sum = 0.0;
  for (const auto& [key, count] : table) sum += std::pow(static_cast<double>(count) / n, alpha);
  return std::log(sum) / (1.0 - alpha);
}

double tsallis(const FrequencyTable& table, double q) {
  if (q == 1.0 || !std::isfinite(q)) throw InvalidParameterError("Tsallis parameter must be finite and q != 1");
  require_nonempty(table);
  const double n = static_cast<double>(table.total());
  // 1 - sum p^q == sum p (1 - p^(q-1)); the expm1 form keeps precision near q = 1.
  double deficit = 0.0;
  for (const auto& [key, count] : table) {
    const double p = static_cast<double>(count) / n;
    deficit -= p * std::expm1((q - 1.0) * std::log(p));
  }
  return deficit / (q - 1.0);
}

std::int64_t tsallis_int_scaled(const FrequencyTable& table, int q, std::int64_t precision) {
  validate_scaled_args(q, precision);
  require_nonempty(table);
  const auto n_pow = checked_pow(table.total(), q);
  if (!n_pow) return scaled_big(table, q, precision);

  // sum f_i^q <= (sum f_i)^q, so every partial sum fits once n^q does.
  std::int64_t sum = 0;
  for (const auto& [key, count] : table) sum += *checked_pow(count, q);
  const UInt128 numerator = static_cast<UInt128>(precision) * static_cast<UInt128>(*n_pow - sum);
  const UInt128 denominator = static_cast<UInt128>(q - 1) * static_cast<UInt128>(*n_pow);
  return static_cast<std::int64_t>(numerator / denominator);
}

std::int64_t tsallis_int_scaled_fixed(const FrequencyTable& table, int q, std::int64_t precision) {
  validate_scaled_args(q, precision);
  require_nonempty(table);
  const auto n_pow = checked_pow(table.total(), q);
  if (!n_pow) throw OverflowError(fmt::format("n^q overflows int64 (n={}, q={})", table.total(), q));
  std::int64_t sum = 0;
  for (const auto& [key, count] : table) sum += *checked_pow(count, q);
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
  if (__builtin_mul_overflow(precision, *n_pow - sum, &numerator) ||
      __builtin_mul_overflow(static_cast<std::int64_t>(q - 1), *n_pow, &denominator)) {
    throw OverflowError(fmt::format("scaled Tsallis overflows int64 (n={}, q={}, precision={})", table.total(), q,
                                    precision));
  }
  return numerator / denominator;
}

EntropyMeasure EntropyMeasure::make_shannon() { return {Kind::shannon, 0.0, 0}; }

EntropyMeasure EntropyMeasure::make_renyi(double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw InvalidParameterError("Renyi order must satisfy alpha >= 0, alpha != 1");
  }
  return {Kind::renyi, alpha, 0};
}

EntropyMeasure EntropyMeasure::make_tsallis(double q) {
  if (q == 1.0 || !std::isfinite(q)) throw InvalidParameterError("Tsallis parameter must be finite and q != 1");
  return {Kind::tsallis, q, 0};
}

EntropyMeasure EntropyMeasure::make_tsallis_int_scaled(int q, std::int64_t precision) {
  validate_scaled_args(q, precision);
  return {Kind::tsallis_int_scaled, static_cast<double>(q), precision};
}

std::string EntropyMeasure::name() const {
  switch (kind_) {
    case Kind::shannon:
      return "shannon";
    case Kind::renyi:
      return fmt::format("renyi(alpha={})", parameter_);
    case Kind::tsallis:
      return fmt::format("tsallis(q={})", parameter_);
    case Kind::tsallis_int_scaled:
      return fmt::format("tsallis-int(q={},precision={})", static_cast<int>(parameter_), precision_);
  }
  return "unknown";
}

double EntropyMeasure::evaluate(const FrequencyTable& table) const {
  switch (kind_) {
    case Kind::shannon:
      return shannon(table);
    case Kind::renyi:
      return renyi(table, parameter_);
    case Kind::tsallis:
      return tsallis(table, parameter_);
    case Kind::tsallis_int_scaled:
      return static_cast<double>(evaluate_scaled(table));
  }
  return 0.0;
}

std::int64_t EntropyMeasure::evaluate_scaled(const FrequencyTable& table) const {
  if (kind_ != Kind::tsallis_int_scaled) throw InvalidParameterError(name() + " has no integer-scaled form");
  return tsallis_int_scaled(table, static_cast<int>(parameter_), precision_);
}

}  // namespace entdiff
