#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "teletype/record.hpp"

namespace teletype::client {

/// Destination for emitted records. Delivery order must match call order.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void deliver(const TelemetryRecord& record) = 0;
  /// Blocks until every delivered record has been handed off.
  virtual void flush() {}
};

class MemorySink : public RecordSink {
 public:
  void deliver(const TelemetryRecord& record) override { records_.push_back(record); }
  const std::vector<TelemetryRecord>& records() const { return records_; }

 private:
  std::vector<TelemetryRecord> records_;
};

/// Appends one serialized record per line.
class FileSink : public RecordSink {
 public:
  explicit FileSink(const std::filesystem::path& path);
  void deliver(const TelemetryRecord& record) override;
  void flush() override;

 private:
  std::ofstream out_;
};

/// Posts records to an ingest service from a background thread. Records are
/// batched in arrival order; a batch that cannot be delivered after a few
/// attempts is dropped and counted.
class HttpSink : public RecordSink {
 public:
  /// `url` is `http://host:port`; the path /v1/records is appended.
  explicit HttpSink(const std::string& url, std::size_t max_batch_bytes = 32 * 1024);
  ~HttpSink() override;
  HttpSink(const HttpSink&) = delete;
  HttpSink& operator=(const HttpSink&) = delete;

  void deliver(const TelemetryRecord& record) override;
  void flush() override;

  std::size_t dropped() const;

 private:
  void run();

  std::string host_;
  int port_ = 80;
  std::size_t max_batch_bytes_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  bool in_flight_ = false;
  bool stopping_ = false;
  std::size_t dropped_ = 0;
  std::thread worker_;
};

/// A file path or an http:// URL.
std::unique_ptr<RecordSink> make_sink(const std::string& target);

}  // namespace teletype::client
