#pragma once

#include <string>
#include <string_view>

#include "teletype/record.hpp"

namespace teletype {

/// Renders one record as a single JSON line (no trailing newline). Only fixed
/// field names, fixed enum tags and digits ever appear in the output.
///
/// Layout, in this order:
///   session_id, client_ts_ms, [server_ts_ms], mode, reason, lines_total,
///   lines_edit (integer or "corrupt"),
///   overall.{type_curr,type_prev,bg_curr,bg_prev}.{total,module,edit},
///   overall.too_complex, edit_kinds.<Kind>.{curr,prev}
///
/// Throws RecordError(Invariant) if the record violates a schema invariant.
std::string serialize_record(const TelemetryRecord& record);

/// Strict inverse of serialize_record: unknown or missing fields, wrong value
/// types and out-of-vocabulary tags are rejected.
///
/// Throws RecordError(Parse) for malformed text and RecordError(Schema) for
/// well-formed text that does not describe a valid record.
TelemetryRecord parse_record(std::string_view line);

}  // namespace teletype
