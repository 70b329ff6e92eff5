#include "teletype/cleaning.hpp"

#include <set>
#include <utility>

namespace teletype {

std::vector<TelemetryRecord> clean(std::span<const TelemetryRecord> records) {
  std::vector<TelemetryRecord> out;
  out.reserve(records.size());
  std::set<std::pair<SessionId, std::int64_t>> seen;
  for (const auto& record : records) {
    if (!seen.emplace(record.session_id, record.client_ts_ms).second) continue;
    out.push_back(record);
    auto& kept = out.back();
    if (kept.lines_edit && *kept.lines_edit < 0) {
      kept.lines_edit.reset();
      kept.edit_kinds.clear();
    }
  }
  return out;
}

}  // namespace teletype
