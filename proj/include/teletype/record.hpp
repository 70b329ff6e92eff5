#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "teletype/error_kind.hpp"

namespace teletype {

/// Type-analysis mode of a module, ordered from weakest to strongest.
enum class Mode : std::uint8_t { NoCheck, NonStrict, Strict };

enum class Reason : std::uint8_t { Keystroke, ModuleSwitch };

std::string_view to_string(Mode mode);
std::string_view to_string(Reason reason);
std::optional<Mode> mode_from_string(std::string_view text);
std::optional<Reason> reason_from_string(std::string_view text);

/// Pseudonymous session identifier: a number in [0, 10^15) that is always
/// rendered as exactly 15 decimal digits.
class SessionId {
 public:
  static constexpr std::uint64_t kLimit = 1'000'000'000'000'000ULL;
  static constexpr std::size_t kDigits = 15;

  constexpr SessionId() = default;
  explicit SessionId(std::uint64_t value);

  /// Accepts exactly 15 ASCII digits.
  static std::optional<SessionId> parse(std::string_view digits);

  std::uint64_t value() const { return value_; }
  std::string str() const;

  auto operator<=>(const SessionId&) const = default;

 private:
  std::uint64_t value_ = 0;
};

struct LocCounts {
  std::int64_t total = 0;
  std::int64_t in_module = 0;
  std::int64_t in_edit_range = 0;

  bool operator==(const LocCounts&) const = default;
};

struct OverallCounts {
  static constexpr std::size_t kScalarCount = 13;

  LocCounts type_curr;
  LocCounts type_prev;
  LocCounts bg_curr;
  LocCounts bg_prev;
  std::int64_t too_complex_total = 0;

  bool operator==(const OverallCounts&) const = default;
};

struct KindPair {
  std::int64_t curr = 0;
  std::int64_t prev = 0;

  bool operator==(const KindPair&) const = default;
};

/// Per-kind (current, previous) counts of errors overlapping the edit range.
/// Zero pairs are never stored.
class EditKindCounts {
 public:
  static constexpr std::size_t kMaxScalars = 2 * kErrorKindCount;

  void set(ErrorKind kind, KindPair pair);
  KindPair get(ErrorKind kind) const;
  void clear() { entries_.clear(); }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const { return 2 * entries_.size(); }
  const std::map<ErrorKind, KindPair>& entries() const { return entries_; }

  bool operator==(const EditKindCounts&) const = default;

 private:
  std::map<ErrorKind, KindPair> entries_;
};

struct TelemetryRecord {
  SessionId session_id;
  std::int64_t client_ts_ms = 0;
  std::optional<std::int64_t> server_ts_ms;
  Mode mode = Mode::NoCheck;
  Reason reason = Reason::Keystroke;
  std::int64_t lines_total = 0;
  // Absent means the edit range was found corrupt during cleaning.
  std::optional<std::int64_t> lines_edit = 0;
  OverallCounts overall;
  EditKindCounts edit_kinds;

  bool edit_corrupt() const { return !lines_edit.has_value(); }

  bool operator==(const TelemetryRecord&) const = default;
};

class RecordError : public std::runtime_error {
 public:
  enum class Kind { Parse, Schema, Invariant };

  RecordError(Kind kind, std::string message, std::size_t offset = 0)
      : std::runtime_error(std::move(message)), kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  /// Byte offset into the offending line, when known.
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Returns a diagnostic naming the first violated invariant, or nullopt.
std::optional<std::string> find_invariant_violation(const TelemetryRecord& record);

}  // namespace teletype
