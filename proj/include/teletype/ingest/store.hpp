#pragma once

#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "teletype/record.hpp"

namespace teletype::ingest {

/// Append-only record store: one `records-YYYYMMDD.jsonl` file per UTC day
/// of server_ts_ms. Appends are serialized and fsync'ed before returning.
class RecordStore {
 public:
  /// Creates the directory if needed.
  explicit RecordStore(std::filesystem::path dir);

  /// Every record must carry server_ts_ms. Throws std::system_error on I/O
  /// failure.
  void append(std::span<const TelemetryRecord> records);

  /// All records in append order. A trailing line without a newline is an
  /// interrupted write and is skipped. Throws on unreadable files or
  /// unparseable lines.
  std::vector<TelemetryRecord> read_all() const;

  /// Largest server_ts_ms in the store, or 0.
  std::int64_t last_server_ts() const;

  const std::filesystem::path& dir() const { return dir_; }

  static std::string file_name_for(std::int64_t server_ts_ms);

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

/// Reads records from a store directory, leaving it untouched, or from a
/// single JSONL file.
std::vector<TelemetryRecord> read_records(const std::filesystem::path& path);

/// Parses complete lines of a JSONL stream; throws RecordError with the
/// 1-based line number in the message on the first bad line.
std::vector<TelemetryRecord> parse_lines(std::string_view text, bool skip_partial_tail);

}  // namespace teletype::ingest
