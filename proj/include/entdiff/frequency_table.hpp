#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace entdiff {

struct StringKeyHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view key) const noexcept { return std::hash<std::string_view>{}(key); }
};

/// Per-window occurrence counts of flow keys (addresses).
///
/// Keys with a zero count are never stored, so `distinct()` is the support
/// size of the empirical distribution and `total()` is its sample size n.
class FrequencyTable {
 public:
  using Map = std::unordered_map<std::string, std::uint64_t, StringKeyHash, std::equal_to<>>;
  using const_iterator = Map::const_iterator;

  FrequencyTable() = default;

  /// Adds `count` occurrences of `key`. A zero count is a no-op.
  void add(std::string_view key, std::uint64_t count = 1);

  /// Adds every count of `other` into this table.
  void merge(const FrequencyTable& other);

  /// Removes the counts of `other`, which must have been merged in earlier.
  /// Keys that reach zero are erased.
  void subtract(const FrequencyTable& other);

  void clear() noexcept;

  std::uint64_t count(std::string_view key) const;
  std::uint64_t total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return total_ == 0; }

  const_iterator begin() const noexcept { return counts_.begin(); }
  const_iterator end() const noexcept { return counts_.end(); }

 private:
  Map counts_;
  std::uint64_t total_ = 0;
};

}  // namespace entdiff
