#include "entdiff/flow_io.hpp"

#include <cstring>
#include <unistd.h>

#include <zlib.h>

#include "entdiff/errors.hpp"

namespace entdiff {

namespace {

constexpr std::size_t kChunk = 1 << 20;

gzFile as_gz(void* file) { return static_cast<gzFile>(file); }

}  // namespace

LineReader::LineReader(const std::string& path) : path_(path), buffer_(kChunk) {
  gzFile file = path == "-" ? gzdopen(dup(STDIN_FILENO), "rb") : gzopen(path.c_str(), "rb");
  if (file == nullptr) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  gzbuffer(file, 256 * 1024);
  file_ = file;
}

LineReader::~LineReader() {
  if (file_ != nullptr) gzclose(as_gz(file_));
}

bool LineReader::refill() {
  if (eof_) return false;
  if (begin_ > 0) {
    std::memmove(buffer_.data(), buffer_.data() + begin_, end_ - begin_);
    end_ -= begin_;
    begin_ = 0;
  }
  if (end_ == buffer_.size()) buffer_.resize(buffer_.size() * 2);
  const int got = gzread(as_gz(file_), buffer_.data() + end_, static_cast<unsigned>(buffer_.size() - end_));
  if (got < 0) {
    int code = 0;
    throw IoError("read error on '" + path_ + "': " + gzerror(as_gz(file_), &code));
  }
  if (got == 0) {
    eof_ = true;
    return false;
  }
  end_ += static_cast<std::size_t>(got);
  return true;
}

bool LineReader::next(std::string_view& line) {
  std::size_t scanned = begin_;
  for (;;) {
    const auto* hit = static_cast<const char*>(std::memchr(buffer_.data() + scanned, '\n', end_ - scanned));
    if (hit != nullptr) {
      const auto newline = static_cast<std::size_t>(hit - buffer_.data());
      line = std::string_view(buffer_.data() + begin_, newline - begin_);
      begin_ = newline + 1;
      ++line_number_;
      return true;
    }
    const std::size_t pending = end_ - begin_;
    if (!refill()) {
      if (begin_ == end_) return false;
      line = std::string_view(buffer_.data() + begin_, end_ - begin_);
      begin_ = end_;
      ++line_number_;
      return true;
    }
    scanned = begin_ + pending;
  }
}

IngestCounters ingest_flow_csv(LineReader& reader, Windowizer& windowizer, const IngestOptions& options,
                               const std::function<void(const ParseError&)>& on_error) {
  IngestCounters counters;
  std::string_view line;
  bool seen_data = false;
  while (reader.next(line)) {
    ++counters.lines;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    if (!seen_data) {
      seen_data = true;
      if (line.starts_with("timestamp_ms")) continue;
    }
    FlowFields fields;
    try {
      fields = parse_flow_fields(line, reader.line_number());
    } catch (const ParseError& error) {
      ++counters.parse_errors;
      if (on_error) on_error(error);
      if (counters.parse_errors > options.max_parse_errors) throw;
      continue;
    }
    bool accepted = false;
    try {
      accepted = windowizer.admit(fields.timestamp_ms);
    } catch (const OrderError& error) {
      throw OrderError("line " + std::to_string(reader.line_number()) + ": " + error.what());
    }
    ++counters.records;
    if (accepted) windowizer.add(fields.src, fields.dst);
  }
  return counters;
}

}  // namespace entdiff
