#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teletype/client/client.hpp"
#include "teletype/sim/scenario.hpp"

namespace teletype::sim {

struct RunOptions {
  // Simulated time between consecutive actions; must be positive so that
  // records of one session have distinct timestamps.
  std::int64_t event_gap_ms = 100;
  // Replays each `type` character by character, one analysis per keystroke.
  bool per_char = false;
};

/// Ground truth for one simulated event. Analyses are copied for every event
/// so that any record can be rebuilt from its event alone.
struct LedgerEvent {
  std::size_t action = 0;  // position in Scenario::actions; 0 for the start event
  std::string kind;        // "start" or an action name
  std::int64_t ts_ms = 0;
  std::string focus;       // focused module; the outgoing one for a switch
  Mode mode = Mode::NoCheck;
  std::optional<Mode> mode_from;  // set when the event changed the focused module's mode
  std::optional<Reason> reason;   // kind of record the event is eligible for
  bool emitted = false;
  std::int64_t lines_total = 0;
  EditRange range;  // edit range the record would report
  analyzer::ProjectAnalysis curr;
  analyzer::ProjectAnalysis prev;
  std::int64_t too_complex_running = 0;
};

struct Ledger {
  SessionId session_id;
  bool enrolled = false;
  std::vector<LedgerEvent> events;
  // Source-derived strings that must never appear in emitted bytes.
  std::set<std::string> forbidden;
};

struct RunResult {
  std::vector<TelemetryRecord> records;
  Ledger ledger;
  analyzer::Project final_project;
};

/// Replays `scenario` through a TelemetryClient whose clock is the simulated
/// clock. Records go to `sink` when given and are always returned. Throws
/// ScenarioError with the action position for an action the client rejects.
RunResult run_scenario(const Scenario& scenario, const client::ClientConfig& config,
                       const RunOptions& options = {}, client::RecordSink* sink = nullptr);

/// Identifiers, literals, module and asset names of every text the scenario
/// can produce.
std::set<std::string> source_strings(const Scenario& scenario);

/// The full message of every error and each quoted fragment in it.
void add_message_strings(const AnalysisResult& result, std::set<std::string>& out);

std::string ledger_to_json(const Ledger& ledger);

}  // namespace teletype::sim
