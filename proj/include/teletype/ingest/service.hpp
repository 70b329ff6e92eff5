#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "teletype/ingest/store.hpp"

namespace teletype::ingest {

using Clock = std::function<std::int64_t()>;

/// Milliseconds since the epoch from the system clock.
std::int64_t wall_clock_ms();

struct LineRejection {
  int line = 0;  // 1-based within the request body
  std::string reason;
};

struct IngestResult {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<LineRejection> errors;
  bool too_large = false;

  std::string to_json() const;
};

struct ExportFilter {
  std::optional<SessionId> session;
  std::optional<std::int64_t> from_ms;  // inclusive, on server_ts_ms
  std::optional<std::int64_t> to_ms;    // exclusive
  bool cleaned = false;
};

class IngestService {
 public:
  static constexpr std::size_t kDefaultMaxBody = 64 * 1024;

  IngestService(RecordStore& store, Clock clock, std::size_t max_body = kDefaultMaxBody);

  /// Parses each non-empty line of `body`, stamps server_ts_ms and appends the
  /// valid ones. Server timestamps never decrease.
  IngestResult ingest(std::string_view body);

  /// Records in append order; cleaning, when requested, runs on the whole
  /// store before the filter.
  std::vector<TelemetryRecord> export_records(const ExportFilter& filter) const;

  std::size_t max_body() const { return max_body_; }

 private:
  RecordStore& store_;
  Clock clock_;
  std::size_t max_body_;
  std::mutex mu_;
  std::int64_t last_ts_ = 0;
};

}  // namespace teletype::ingest
