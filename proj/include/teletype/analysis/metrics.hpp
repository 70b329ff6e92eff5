#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teletype/analysis/stats.hpp"
#include "teletype/analysis/table.hpp"
#include "teletype/record.hpp"

namespace teletype::analysis {

/// Records of one session ordered by client timestamp (stable for ties).
struct SessionGroup {
  SessionId session_id;
  std::vector<TelemetryRecord> records;

  std::int64_t span_ms() const;
};

/// Groups by session id, sessions in ascending id order.
std::vector<SessionGroup> group_sessions(std::span<const TelemetryRecord> records);

/// Hour bucket timestamp: server time when present, client time otherwise.
std::int64_t bucket_time_ms(const TelemetryRecord& r);

/// "YYYY-MM-DDTHH:00" of the hour containing ts shifted by the offset.
std::string hour_label(std::int64_t ts_ms, int tz_offset_min);

Table records_per_hour(std::span<const TelemetryRecord> records, int tz_offset_min = 0);
Table size_stats(std::span<const TelemetryRecord> records);
Table session_stats(std::span<const TelemetryRecord> records);
Table error_location_breakdown(std::span<const TelemetryRecord> records);
/// Three tables: mode_records, mode_sessions, mode_transitions.
std::vector<Table> mode_distribution(std::span<const TelemetryRecord> records);
Table transition_effect(std::span<const TelemetryRecord> records);
Table errors_by_mode(std::span<const TelemetryRecord> records);
Table edit_delta_by_kind(std::span<const TelemetryRecord> records);
Table error_popularity(std::span<const TelemetryRecord> records, Mode mode);
Table density_deltas(std::span<const TelemetryRecord> records);
Table module_delta_breakdown(std::span<const TelemetryRecord> records);

struct MetricOptions {
  int tz_offset_min = 0;
  std::optional<Mode> mode;  // error_popularity only; all modes when absent
};

/// Subcommand names in output order.
const std::vector<std::string>& metric_names();

/// Tables of one subcommand, or of every subcommand for "all". Throws
/// std::invalid_argument for an unknown name.
std::vector<Table> compute_metric(const std::string& name, std::span<const TelemetryRecord> records,
                                  const MetricOptions& options = {});

// Row labels shared with other producers of the same tables.
enum class Delta { Up, Same, Down, None };
/// Up if curr > prev, Down if curr < prev, Same if equal and nonzero,
/// None for (0, 0).
Delta classify(std::int64_t curr, std::int64_t prev);
std::string_view session_class_name(std::optional<Mode> pure_mode);

}  // namespace teletype::analysis
