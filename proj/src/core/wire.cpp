#include "teletype/wire.hpp"

#include <fmt/format.h>

#include <json.hpp>

namespace teletype {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr std::string_view kCorrupt = "corrupt";

ordered_json loc_to_json(const LocCounts& c) {
  ordered_json j;
  j["total"] = c.total;
  j["module"] = c.in_module;
  j["edit"] = c.in_edit_range;
  return j;
}

[[noreturn]] void schema_error(std::string message) {
  throw RecordError(RecordError::Kind::Schema, std::move(message));
}

void expect_keys(const json& object, std::string_view where,
                 std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional = {}) {
  if (!object.is_object()) schema_error(fmt::format("{} must be an object", where));
  for (auto key : required) {
    if (!object.contains(key)) {
      schema_error(fmt::format("{} is missing field '{}'", where, key));
    }
  }
  for (const auto& item : object.items()) {
    bool known = false;
    for (auto key : required) known = known || item.key() == key;
    for (auto key : optional) known = known || item.key() == key;
    if (!known) schema_error(fmt::format("{} has an unknown field", where));
  }
}

std::int64_t get_int(const json& object, std::string_view key, std::string_view where) {
  const json& value = object.at(key);
  if (value.is_number_unsigned()) {
    auto v = value.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) {
      schema_error(fmt::format("{}.{} is out of range", where, key));
    }
    return static_cast<std::int64_t>(v);
  }
  if (!value.is_number_integer()) {
    schema_error(fmt::format("{}.{} must be an integer", where, key));
  }
  return value.get<std::int64_t>();
}

std::int64_t get_count(const json& object, std::string_view key, std::string_view where) {
  auto v = get_int(object, key, where);
  if (v < 0) schema_error(fmt::format("{}.{} must be non-negative", where, key));
  return v;
}

std::string_view get_string(const json& object, std::string_view key) {
  const json& value = object.at(key);
  if (!value.is_string()) schema_error(fmt::format("{} must be a string", key));
  return value.get_ref<const std::string&>();
}

LocCounts loc_from_json(const json& object, std::string_view name) {
  std::string where = fmt::format("overall.{}", name);
  expect_keys(object, where, {"total", "module", "edit"});
  return LocCounts{get_count(object, "total", where),
                   get_count(object, "module", where),
                   get_count(object, "edit", where)};
}

}  // namespace

std::string serialize_record(const TelemetryRecord& record) {
  if (auto violation = find_invariant_violation(record)) {
    throw RecordError(RecordError::Kind::Invariant, *violation);
  }
  ordered_json j;
  j["session_id"] = record.session_id.str();
  j["client_ts_ms"] = record.client_ts_ms;
  if (record.server_ts_ms) j["server_ts_ms"] = *record.server_ts_ms;
  j["mode"] = to_string(record.mode);
  j["reason"] = to_string(record.reason);
  j["lines_total"] = record.lines_total;
  if (record.lines_edit) {
    j["lines_edit"] = *record.lines_edit;
  } else {
    j["lines_edit"] = kCorrupt;
  }

  const auto& o = record.overall;
  ordered_json overall;
  overall["type_curr"] = loc_to_json(o.type_curr);
  overall["type_prev"] = loc_to_json(o.type_prev);
  overall["bg_curr"] = loc_to_json(o.bg_curr);
  overall["bg_prev"] = loc_to_json(o.bg_prev);
  overall["too_complex"] = o.too_complex_total;
  j["overall"] = std::move(overall);

  ordered_json kinds = ordered_json::object();
  for (const auto& [kind, pair] : record.edit_kinds.entries()) {
    ordered_json entry;
    entry["curr"] = pair.curr;
    entry["prev"] = pair.prev;
    kinds[std::string(to_string(kind))] = std::move(entry);
  }
  j["edit_kinds"] = std::move(kinds);
  return j.dump();
}

TelemetryRecord parse_record(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  if (line.empty()) throw RecordError(RecordError::Kind::Parse, "empty line", 0);

  json j;
  try {
    j = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw RecordError(RecordError::Kind::Parse,
                      fmt::format("malformed record at byte {}", offset), offset);
  }

  expect_keys(j, "record",
              {"session_id", "client_ts_ms", "mode", "reason", "lines_total",
               "lines_edit", "overall", "edit_kinds"},
              {"server_ts_ms"});

  TelemetryRecord r;
  auto id = SessionId::parse(get_string(j, "session_id"));
  if (!id) schema_error("session_id must be exactly 15 decimal digits");
  r.session_id = *id;
  r.client_ts_ms = get_count(j, "client_ts_ms", "record");
  if (j.contains("server_ts_ms")) r.server_ts_ms = get_count(j, "server_ts_ms", "record");

  auto mode = mode_from_string(get_string(j, "mode"));
  if (!mode) schema_error("mode is not one of nocheck, nonstrict, strict");
  r.mode = *mode;
  auto reason = reason_from_string(get_string(j, "reason"));
  if (!reason) schema_error("reason is not one of keystroke, module_switch");
  r.reason = *reason;

  r.lines_total = get_count(j, "lines_total", "record");
  if (j.at("lines_edit").is_string()) {
    if (get_string(j, "lines_edit") != kCorrupt) {
      schema_error("lines_edit must be an integer or \"corrupt\"");
    }
    r.lines_edit.reset();
  } else {
    // Negative values are representable: they are the anomaly that cleaning
    // exists to repair.
    r.lines_edit = get_int(j, "lines_edit", "record");
  }

  const json& overall = j.at("overall");
  expect_keys(overall, "overall",
              {"type_curr", "type_prev", "bg_curr", "bg_prev", "too_complex"});
  r.overall.type_curr = loc_from_json(overall.at("type_curr"), "type_curr");
  r.overall.type_prev = loc_from_json(overall.at("type_prev"), "type_prev");
  r.overall.bg_curr = loc_from_json(overall.at("bg_curr"), "bg_curr");
  r.overall.bg_prev = loc_from_json(overall.at("bg_prev"), "bg_prev");
  r.overall.too_complex_total = get_count(overall, "too_complex", "overall");

  const json& kinds = j.at("edit_kinds");
  if (!kinds.is_object()) schema_error("edit_kinds must be an object");
  for (const auto& item : kinds.items()) {
    auto kind = error_kind_from_string(item.key());
    if (!kind) schema_error("edit_kinds contains an unknown error kind");
    expect_keys(item.value(), "edit_kinds entry", {"curr", "prev"});
    KindPair pair{get_count(item.value(), "curr", "edit_kinds"),
                  get_count(item.value(), "prev", "edit_kinds")};
    if (pair.curr == 0 && pair.prev == 0) {
      schema_error("edit_kinds must not store zero pairs");
    }
    if (r.edit_kinds.get(*kind) != KindPair{}) {
      schema_error("edit_kinds lists the same kind twice");
    }
    r.edit_kinds.set(*kind, pair);
  }

  if (auto violation = find_invariant_violation(r)) schema_error(*violation);
  return r;
}

}  // namespace teletype
