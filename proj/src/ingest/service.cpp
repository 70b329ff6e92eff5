#include "teletype/ingest/service.hpp"

#include <fmt/format.h>

#include <chrono>

#include "json.hpp"
#include "teletype/cleaning.hpp"
#include "teletype/wire.hpp"

namespace teletype::ingest {

std::int64_t wall_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string IngestResult::to_json() const {
  nlohmann::ordered_json j;
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  j["errors"] = nlohmann::ordered_json::array();
  for (const auto& e : errors) j["errors"].push_back({{"line", e.line}, {"reason", e.reason}});
  if (too_large) j["error"] = "request body too large";
  return j.dump();
}

IngestService::IngestService(RecordStore& store, Clock clock, std::size_t max_body)
    : store_(store), clock_(std::move(clock)), max_body_(max_body), last_ts_(store.last_server_ts()) {}

IngestResult IngestService::ingest(std::string_view body) {
  IngestResult result;
  if (body.size() > max_body_) {
    result.too_large = true;
    return result;
  }

  std::lock_guard lock(mu_);
  std::vector<TelemetryRecord> batch;
  std::size_t start = 0;
  int line_no = 0;
  while (start < body.size()) {
    auto end = body.find('\n', start);
    if (end == std::string_view::npos) end = body.size();
    ++line_no;
    auto line = body.substr(start, end - start);
    start = end + 1;
    if (line.empty() || line == "\r") continue;
    try {
      TelemetryRecord r = parse_record(line);
      if (r.server_ts_ms) throw RecordError(RecordError::Kind::Schema, "server_ts_ms is assigned by the server");
      last_ts_ = std::max(last_ts_, clock_());
      r.server_ts_ms = last_ts_;
      batch.push_back(std::move(r));
    } catch (const RecordError& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  store_.append(batch);
  result.accepted = batch.size();
  result.rejected = result.errors.size();
  return result;
}

std::vector<TelemetryRecord> IngestService::export_records(const ExportFilter& filter) const {
  auto records = store_.read_all();
  if (filter.cleaned) records = clean(records);
  std::erase_if(records, [&](const TelemetryRecord& r) {
    const std::int64_t ts = r.server_ts_ms.value_or(r.client_ts_ms);
    if (filter.session && r.session_id != *filter.session) return true;
    if (filter.from_ms && ts < *filter.from_ms) return true;
    if (filter.to_ms && ts >= *filter.to_ms) return true;
    return false;
  });
  return records;
}

}  // namespace teletype::ingest
