#include "entdiff/frequency_table.hpp"

#include "entdiff/errors.hpp"

namespace entdiff {

void FrequencyTable::add(std::string_view key, std::uint64_t count) {
  if (count == 0) return;
  if (auto it = counts_.find(key); it != counts_.end()) {
    it->second += count;
  } else {
    counts_.emplace(std::string(key), count);
  }
  total_ += count;
}

void FrequencyTable::merge(const FrequencyTable& other) {
  for (const auto& [key, count] : other.counts_) add(key, count);
}

void FrequencyTable::subtract(const FrequencyTable& other) {
  for (const auto& [key, count] : other.counts_) {
    auto it = counts_.find(key);
    if (it == counts_.end() || it->second < count) {
      throw InvalidParameterError("subtract: table does not contain key '" + key + "' with sufficient count");
    }
    it->second -= count;
    total_ -= count;
    if (it->second == 0) counts_.erase(it);
  }
}

void FrequencyTable::clear() noexcept {
  counts_.clear();
  total_ = 0;
}

std::uint64_t FrequencyTable::count(std::string_view key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

}  // namespace entdiff
