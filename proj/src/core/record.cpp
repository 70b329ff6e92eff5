#include "teletype/record.hpp"

#include <fmt/format.h>

namespace teletype {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::NoCheck:
      return "nocheck";
    case Mode::NonStrict:
      return "nonstrict";
    case Mode::Strict:
      return "strict";
  }
  return "nocheck";
}

std::string_view to_string(Reason reason) {
  return reason == Reason::Keystroke ? "keystroke" : "module_switch";
}

std::optional<Mode> mode_from_string(std::string_view text) {
  if (text == "nocheck") return Mode::NoCheck;
  if (text == "nonstrict") return Mode::NonStrict;
  if (text == "strict") return Mode::Strict;
  return std::nullopt;
}

std::optional<Reason> reason_from_string(std::string_view text) {
  if (text == "keystroke") return Reason::Keystroke;
  if (text == "module_switch") return Reason::ModuleSwitch;
  return std::nullopt;
}

SessionId::SessionId(std::uint64_t value) : value_(value) {
  if (value >= kLimit) {
    throw std::out_of_range("session id must be below 10^15");
  }
}

std::optional<SessionId> SessionId::parse(std::string_view digits) {
  if (digits.size() != kDigits) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return SessionId(value);
}

std::string SessionId::str() const { return fmt::format("{:015d}", value_); }

void EditKindCounts::set(ErrorKind kind, KindPair pair) {
  if (pair.curr == 0 && pair.prev == 0) {
    entries_.erase(kind);
  } else {
    entries_[kind] = pair;
  }
}

KindPair EditKindCounts::get(ErrorKind kind) const {
  auto it = entries_.find(kind);
  return it == entries_.end() ? KindPair{} : it->second;
}

namespace {

std::optional<std::string> check_loc(const LocCounts& c, std::string_view name) {
  if (c.total < 0 || c.in_module < 0 || c.in_edit_range < 0) {
    return fmt::format("overall.{} has a negative count", name);
  }
  if (c.in_module > c.total) {
    return fmt::format("overall.{}.module exceeds total", name);
  }
  if (c.in_edit_range > c.in_module) {
    return fmt::format("overall.{}.edit exceeds module", name);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> find_invariant_violation(const TelemetryRecord& r) {
  if (r.client_ts_ms < 0) return "client_ts_ms is negative";
  if (r.server_ts_ms && *r.server_ts_ms < 0) return "server_ts_ms is negative";
  if (r.lines_total < 0) return "lines_total is negative";
  const auto& o = r.overall;
  if (auto v = check_loc(o.type_curr, "type_curr")) return v;
  if (auto v = check_loc(o.type_prev, "type_prev")) return v;
  if (auto v = check_loc(o.bg_curr, "bg_curr")) return v;
  if (auto v = check_loc(o.bg_prev, "bg_prev")) return v;
  if (o.too_complex_total < 0) return "overall.too_complex is negative";
  if (r.edit_corrupt() && !r.edit_kinds.empty()) {
    return "edit_kinds must be empty when lines_edit is corrupt";
  }
  for (const auto& [kind, pair] : r.edit_kinds.entries()) {
    if (pair.curr < 0 || pair.prev < 0) {
      return fmt::format("edit_kinds.{} has a negative count", to_string(kind));
    }
  }
  return std::nullopt;
}

}  // namespace teletype
