#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "entdiff/errors.hpp"
#include "entdiff/ingestion.hpp"

namespace entdiff {

/// Buffered line reader over a file or standard input ("-"). Gzip-compressed
/// input is detected and inflated transparently.
class LineReader {
 public:
  explicit LineReader(const std::string& path);
  ~LineReader();

  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  /// Next line without its terminator; valid until the following call.
  bool next(std::string_view& line);

  /// 1-based number of the line most recently returned.
  std::uint64_t line_number() const noexcept { return line_number_; }

 private:
  bool refill();

  void* file_ = nullptr;  // gzFile
  std::string path_;
  std::vector<char> buffer_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::uint64_t line_number_ = 0;
};

struct IngestOptions {
  /// Malformed lines tolerated before the run aborts with the offending
  /// ParseError.
  std::uint64_t max_parse_errors = 0;
};

struct IngestCounters {
  std::uint64_t lines = 0;
  std::uint64_t records = 0;
  std::uint64_t parse_errors = 0;
};

/// Feeds a flow CSV into `windowizer`. Blank lines, '#' comments and a
/// leading "timestamp_ms,..." header are skipped. Every malformed line is
/// reported through `on_error`; OrderError carries the offending line number.
/// Does not call windowizer.finish().
IngestCounters ingest_flow_csv(LineReader& reader, Windowizer& windowizer, const IngestOptions& options,
                               const std::function<void(const ParseError&)>& on_error = {});

/// Header line written by the generator.
inline constexpr std::string_view kFlowCsvHeader = "timestamp_ms,src,dst";

}  // namespace entdiff
