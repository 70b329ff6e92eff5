#include "teletype/client/sink.hpp"

#include <fmt/format.h>

#include <chrono>
#include <regex>
#include <stdexcept>

#include "httplib.h"
#include "teletype/wire.hpp"

namespace teletype::client {

FileSink::FileSink(const std::filesystem::path& path) : out_(path, std::ios::app) {
  if (!out_) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
}

void FileSink::deliver(const TelemetryRecord& record) { out_ << serialize_record(record) << '\n'; }

void FileSink::flush() { out_.flush(); }

HttpSink::HttpSink(const std::string& url, std::size_t max_batch_bytes)
    : max_batch_bytes_(max_batch_bytes) {
  static const std::regex kUrl(R"(http://([^:/]+)(?::(\d+))?/?)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw std::invalid_argument(fmt::format("unsupported sink url '{}'", url));
  }
  host_ = m[1];
  if (m[2].matched) port_ = std::stoi(m[2]);
  worker_ = std::thread([this] { run(); });
}

HttpSink::~HttpSink() {
  flush();
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

void HttpSink::deliver(const TelemetryRecord& record) {
  std::string line = serialize_record(record);
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(line));
  }
  cv_.notify_all();
}

void HttpSink::flush() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return queue_.empty() && !in_flight_; });
}

std::size_t HttpSink::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

void HttpSink::run() {
  httplib::Client http(host_, port_);
  http.set_connection_timeout(std::chrono::seconds(2));
  http.set_read_timeout(std::chrono::seconds(5));
  for (;;) {
    std::string body;
    std::size_t count = 0;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      while (!queue_.empty() &&
             (count == 0 || body.size() + queue_.front().size() + 1 <= max_batch_bytes_)) {
        body += queue_.front();
        body += '\n';
        queue_.pop_front();
        ++count;
      }
      in_flight_ = true;
    }

    bool delivered = false;
    for (int attempt = 0; attempt < 3 && !delivered; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
      auto res = http.Post("/v1/records", body, "text/plain");
      delivered = res && res->status == 200;
    }

    {
      std::lock_guard lock(mu_);
      if (!delivered) dropped_ += count;
      in_flight_ = false;
    }
    cv_.notify_all();
  }
}

std::unique_ptr<RecordSink> make_sink(const std::string& target) {
  if (target.starts_with("http://")) return std::make_unique<HttpSink>(target);
  return std::make_unique<FileSink>(target);
}

}  // namespace teletype::client
