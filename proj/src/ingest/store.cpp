#include "teletype/ingest/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fmt/format.h>

#include <algorithm>
#include <cerrno>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "teletype/wire.hpp"

namespace teletype::ingest {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(int fd, std::string_view data, const std::filesystem::path& path) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), path.string());
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::vector<std::filesystem::path> store_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("records-") && name.ends_with(".jsonl")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<TelemetryRecord> read_dir(const std::filesystem::path& dir) {
  std::vector<TelemetryRecord> out;
  for (const auto& path : store_files(dir)) {
    try {
      auto records = parse_lines(read_file(path), true);
      out.insert(out.end(), records.begin(), records.end());
    } catch (const RecordError& e) {
      throw RecordError(e.kind(), fmt::format("{}: {}", path.filename().string(), e.what()), e.offset());
    }
  }
  return out;
}

}  // namespace

RecordStore::RecordStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  // A crash mid-append can leave a partial last line; cut it off so later
  // appends start on a fresh line.
  for (const auto& path : store_files(dir_)) {
    const std::string text = read_file(path);
    if (text.empty() || text.back() == '\n') continue;
    const auto keep = text.rfind('\n');
    std::filesystem::resize_file(path, keep == std::string::npos ? 0 : keep + 1);
  }
}

std::string RecordStore::file_name_for(std::int64_t server_ts_ms) {
  std::time_t secs = static_cast<std::time_t>(server_ts_ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return fmt::format("records-{:04d}{:02d}{:02d}.jsonl", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday);
}

void RecordStore::append(std::span<const TelemetryRecord> records) {
  std::map<std::string, std::string> by_file;
  std::vector<std::string> order;
  for (const auto& r : records) {
    if (!r.server_ts_ms) throw std::invalid_argument("stored records need a server timestamp");
    auto name = file_name_for(*r.server_ts_ms);
    if (!by_file.contains(name)) order.push_back(name);
    by_file[name] += serialize_record(r) + '\n';
  }

  std::lock_guard lock(mu_);
  for (const auto& name : order) {
    auto path = dir_ / name;
    int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) throw std::system_error(errno, std::generic_category(), path.string());
    try {
      write_all(fd, by_file[name], path);
      if (::fsync(fd) != 0) throw std::system_error(errno, std::generic_category(), path.string());
    } catch (...) {
      ::close(fd);
      throw;
    }
    ::close(fd);
  }
}

std::vector<TelemetryRecord> RecordStore::read_all() const {
  std::lock_guard lock(mu_);
  return read_dir(dir_);
}

std::int64_t RecordStore::last_server_ts() const {
  std::int64_t last = 0;
  for (const auto& r : read_all()) last = std::max(last, r.server_ts_ms.value_or(0));
  return last;
}

std::vector<TelemetryRecord> parse_lines(std::string_view text, bool skip_partial_tail) {
  std::vector<TelemetryRecord> out;
  std::size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (skip_partial_tail) break;
      end = text.size();
    }
    ++line_no;
    auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty() || line == "\r") continue;
    try {
      out.push_back(parse_record(line));
    } catch (const RecordError& e) {
      throw RecordError(e.kind(), fmt::format("line {}: {}", line_no, e.what()), e.offset());
    }
  }
  return out;
}

std::vector<TelemetryRecord> read_records(const std::filesystem::path& path) {
  // Reading never repairs: a torn tail is skipped, not truncated.
  if (std::filesystem::is_directory(path)) return read_dir(path);
  return parse_lines(read_file(path), false);
}

}  // namespace teletype::ingest
