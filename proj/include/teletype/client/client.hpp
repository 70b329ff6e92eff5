#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "teletype/analyzer/incremental.hpp"
#include "teletype/client/sink.hpp"
#include "teletype/edit_range.hpp"
#include "teletype/record.hpp"
#include "teletype/sampler.hpp"

namespace teletype::client {

/// Milliseconds since the epoch.
using Clock = std::function<std::int64_t()>;

struct ClientConfig {
  SamplerConfig sampler;
  analyzer::AnalysisBudget budget;
  std::string sink;  // file path or http:// URL; used by the command-line tools
};

/// Reads a JSON object with optional keys p_session, p_event, seed, sink and
/// max_steps. Throws std::runtime_error on unreadable or invalid files.
ClientConfig load_client_config(const std::filesystem::path& path);

/// Inserts `lines` so that the first of them becomes line `at`.
struct InsertText {
  int at = 1;
  std::vector<std::string> lines;
};
struct DeleteText {
  int from = 1;
  int count = 1;
};
struct ReplaceLine {
  int line = 1;
  std::string text;
};
using TextEdit = std::variant<InsertText, DeleteText, ReplaceLine>;

/// What a record may know about one error: its kind, whether it lies in the
/// focused module, and its line span there.
struct ErrorSite {
  ErrorKind kind = ErrorKind::GenericError;
  bool in_current_module = false;
  int start_line = 1;
  int end_line = 1;
};

std::vector<ErrorSite> error_sites(const AnalysisResult& result, const std::string& current_module);

/// Everything build_record needs. Carries no source text and no names.
struct RecordInputs {
  SessionId session_id;
  std::int64_t client_ts_ms = 0;
  Mode mode = Mode::NoCheck;
  Reason reason = Reason::Keystroke;
  std::int64_t lines_total = 0;
  EditRange edit_range;
  std::vector<ErrorSite> type_curr;
  std::vector<ErrorSite> type_prev;
  std::vector<ErrorSite> bg_curr;
  std::vector<ErrorSite> bg_prev;
  std::int64_t too_complex_total = 0;
};

TelemetryRecord build_record(const RecordInputs& inputs);

/// One editing session. Every edit re-runs the visible and background
/// analyses; keystroke records are sampled, module-switch records are always
/// sent. Sessions that are not enrolled analyze but never emit.
class TelemetryClient {
 public:
  TelemetryClient(analyzer::Project project, const ClientConfig& config, RecordSink& sink,
                  Clock clock);

  bool enrolled() const { return enrollment_.enrolled; }
  SessionId session_id() const { return enrollment_.session_id; }

  /// Sets the initial focus. Emits nothing. Throws std::invalid_argument for
  /// an unknown module.
  void open(const std::string& module_id);

  /// Applies an edit to the focused module and re-analyzes. Returns the record
  /// if one was emitted. Throws std::logic_error before open() and
  /// std::invalid_argument for edits outside the module; state is unchanged
  /// when it throws.
  std::optional<TelemetryRecord> on_edit(const TextEdit& edit);

  /// Emits a record for the outgoing module, then moves focus to `target`.
  /// Throws std::invalid_argument for an unknown or already focused target.
  std::optional<TelemetryRecord> on_module_switch(const std::string& target);

  const analyzer::Project& project() const { return project_; }
  const std::string& current_module() const { return current_; }
  EditRange edit_range() const { return range_; }
  std::int64_t too_complex_running() const { return too_complex_running_; }
  const analyzer::ProjectAnalysis& current() const { return curr_; }
  const analyzer::ProjectAnalysis& previous() const { return prev_; }

 private:
  void analyze();
  TelemetryRecord make_record(Reason reason) const;
  void emit(const TelemetryRecord& record);

  analyzer::Project project_;
  analyzer::ProjectAnalyzer analyzer_;
  Sampler sampler_;
  Enrollment enrollment_;
  RecordSink& sink_;
  Clock clock_;
  std::string current_;
  EditRange range_;
  analyzer::ProjectAnalysis prev_;
  analyzer::ProjectAnalysis curr_;
  std::int64_t too_complex_running_ = 0;
};

}  // namespace teletype::client
