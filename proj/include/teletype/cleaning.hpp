#pragma once

#include <span>
#include <vector>

#include "teletype/record.hpp"

namespace teletype {

/// Repairs the two known anomalies of collected data, preserving order:
///  - among records sharing (session_id, client_ts_ms) only the first survives;
///  - a record with a negative lines_edit keeps its overall counts but its
///    edit range (lines_edit and edit_kinds) is marked corrupt.
/// Idempotent.
std::vector<TelemetryRecord> clean(std::span<const TelemetryRecord> records);

}  // namespace teletype
