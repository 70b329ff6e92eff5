#include "teletype/sim/simulator.hpp"

#include <fmt/format.h>

#include <cctype>

#include "json.hpp"

namespace teletype::sim {

namespace {

bool is_keyword(std::string_view w) {
  static const std::set<std::string_view> kKeywords{
      "local", "function", "if",  "then", "else", "elseif", "end",
      "return", "nil",     "true", "false", "while", "do",   "not",
      "and",   "or"};
  return kKeywords.contains(w);
}

// Identifiers, numbers and string contents of one line, comments skipped.
void scan_line(std::string_view line, std::set<std::string>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '-') return;
    if (c == '"' || c == '\'') {
      std::size_t j = line.find(c, i + 1);
      if (j == std::string_view::npos) j = line.size();
      if (j > i + 1) out.emplace(line.substr(i + 1, j - i - 1));
      i = j + 1;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_' ||
                                 (std::isdigit(static_cast<unsigned char>(c)) && line[j] == '.'))) {
        ++j;
      }
      auto word = line.substr(i, j - i);
      if (!is_keyword(word)) out.emplace(word);
      i = j;
    } else {
      ++i;
    }
  }
}

std::string pragma(Mode mode) { return fmt::format("--!{}", to_string(mode)); }

class Replay {
 public:
  Replay(const Scenario& scenario, const client::ClientConfig& config, const RunOptions& options,
         client::RecordSink* sink)
      : scenario_(scenario),
        options_(options),
        forward_(sink),
        now_(scenario.start_ms),
        client_(scenario.project, config, memory_, [this] { return now_; }) {
    if (options_.event_gap_ms <= 0) throw std::invalid_argument("event_gap_ms must be positive");
    ledger_.session_id = client_.session_id();
    ledger_.enrolled = client_.enrolled();
    ledger_.events.push_back(snapshot(0, "start"));
  }

  RunResult run() {
    for (std::size_t i = 0; i < scenario_.actions.size(); ++i) {
      try {
        std::visit([&](const auto& a) { step(i, a); }, scenario_.actions[i]);
      } catch (const ScenarioError&) {
        throw;
      } catch (const std::exception& e) {
        throw ScenarioError(i, fmt::format("action {} ({}): {}", i, action_name(scenario_.actions[i]),
                                           e.what()));
      }
    }
    ledger_.forbidden = source_strings(scenario_);
    for (const auto& e : ledger_.events) {
      add_message_strings(e.curr.visible, ledger_.forbidden);
      add_message_strings(e.curr.background, ledger_.forbidden);
    }
    return {memory_.records(), std::move(ledger_), client_.project()};
  }

 private:
  LedgerEvent snapshot(std::size_t index, std::string kind) const {
    LedgerEvent e;
    e.action = index;
    e.kind = std::move(kind);
    e.ts_ms = now_;
    e.focus = client_.current_module();
    if (!e.focus.empty()) e.mode = client_.project().module(e.focus).mode();
    e.lines_total = client_.project().line_count();
    e.range = client_.edit_range();
    e.too_complex_running = client_.too_complex_running();
    e.curr = client_.current();
    e.prev = client_.previous();
    return e;
  }

  void require_focus(std::size_t index, const std::string& module) const {
    if (client_.current_module() != module) {
      throw ScenarioError(index, fmt::format("action {}: module '{}' does not have focus", index, module));
    }
  }

  void edit(std::size_t index, std::string_view kind, const client::TextEdit& text_edit,
            const EditOp& op) {
    now_ += options_.event_gap_ms;
    const EditRange before = client_.edit_range();
    const Mode mode_before = client_.project().module(client_.current_module()).mode();
    auto record = client_.on_edit(text_edit);
    LedgerEvent e = snapshot(index, std::string(kind));
    e.reason = Reason::Keystroke;
    e.emitted = record.has_value();
    e.range = apply_edit(before, op);
    if (e.mode != mode_before) e.mode_from = mode_before;
    ledger_.events.push_back(std::move(e));
    if (record) forward(*record);
  }

  void forward(const TelemetryRecord& record) {
    if (forward_) forward_->deliver(record);
  }

  void step(std::size_t i, const OpenAction& a) {
    now_ += options_.event_gap_ms;
    if (!client_.current_module().empty()) {
      throw ScenarioError(i, fmt::format("action {}: a module is already open; use switch", i));
    }
    client_.open(a.module);
    ledger_.events.push_back(snapshot(i, "open"));
  }

  void step(std::size_t i, const TypeAction& a) {
    require_focus(i, a.module);
    if (!options_.per_char || a.text.size() < 2) {
      edit(i, "type", client::InsertText{a.line, {a.text}}, InsertLines{a.line, 1});
      return;
    }
    edit(i, "type", client::InsertText{a.line, {a.text.substr(0, 1)}}, InsertLines{a.line, 1});
    for (std::size_t n = 2; n <= a.text.size(); ++n) {
      edit(i, "type", client::ReplaceLine{a.line, a.text.substr(0, n)}, ModifyLines{a.line, a.line});
    }
  }

  void step(std::size_t i, const DeleteAction& a) {
    require_focus(i, a.module);
    const int n = static_cast<int>(client_.project().module(a.module).lines.size());
    const int count = a.from <= n ? std::min(a.count, n - a.from + 1) : a.count;
    edit(i, "delete", client::DeleteText{a.from, a.count}, DeleteLines{a.from, count});
  }

  void step(std::size_t i, const SetModeAction& a) {
    require_focus(i, a.module);
    const auto& lines = client_.project().module(a.module).lines;
    if (!lines.empty() && lines.front().starts_with("--!")) {
      edit(i, "set_mode", client::ReplaceLine{1, pragma(a.mode)}, ModifyLines{1, 1});
    } else {
      edit(i, "set_mode", client::InsertText{1, {pragma(a.mode)}}, InsertLines{1, 1});
    }
  }

  void step(std::size_t i, const SwitchAction& a) {
    now_ += options_.event_gap_ms;
    LedgerEvent e = snapshot(i, "switch");
    auto record = client_.on_module_switch(a.module);
    if (!e.focus.empty()) e.reason = Reason::ModuleSwitch;
    e.emitted = record.has_value();
    ledger_.events.push_back(std::move(e));
    if (record) forward(*record);
  }

  void step(std::size_t i, const WaitAction& a) {
    now_ += a.ms;
    ledger_.events.push_back(snapshot(i, "wait"));
  }

  const Scenario& scenario_;
  RunOptions options_;
  client::RecordSink* forward_;
  client::MemorySink memory_;
  std::int64_t now_;
  client::TelemetryClient client_;
  Ledger ledger_;
};

nlohmann::ordered_json errors_json(const AnalysisResult& result) {
  auto out = nlohmann::ordered_json::object();
  for (const auto& [module, errors] : result) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& e : errors) {
      list.push_back({{"kind", to_string(e.kind)},
                      {"start_line", e.start_line},
                      {"end_line", e.end_line},
                      {"message", e.message}});
    }
    out[module] = std::move(list);
  }
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const client::ClientConfig& config,
                       const RunOptions& options, client::RecordSink* sink) {
  return Replay(scenario, config, options, sink).run();
}

std::set<std::string> source_strings(const Scenario& scenario) {
  std::set<std::string> out;
  for (const auto& [id, m] : scenario.project.modules) {
    out.insert(id);
    out.insert(id + ".luau");
    for (const auto& line : m.lines) scan_line(line, out);
  }
  out.insert(scenario.project.data_model.begin(), scenario.project.data_model.end());
  out.insert(scenario.project.globals.begin(), scenario.project.globals.end());
  for (const auto& a : scenario.actions) {
    if (const auto* t = std::get_if<TypeAction>(&a)) scan_line(t->text, out);
  }
  return out;
}

void add_message_strings(const AnalysisResult& result, std::set<std::string>& out) {
  for (const auto& [module, errors] : result) {
    for (const auto& e : errors) {
      out.insert(e.message);
      std::size_t i = e.message.find('\'');
      while (i != std::string::npos) {
        const std::size_t j = e.message.find('\'', i + 1);
        if (j == std::string::npos) break;
        out.insert(e.message.substr(i + 1, j - i - 1));
        i = e.message.find('\'', j + 1);
      }
    }
  }
}

std::string ledger_to_json(const Ledger& ledger) {
  nlohmann::ordered_json j;
  j["session_id"] = ledger.session_id.str();
  j["enrolled"] = ledger.enrolled;
  auto events = nlohmann::ordered_json::array();
  for (const auto& e : ledger.events) {
    nlohmann::ordered_json ev;
    ev["action"] = e.action;
    ev["kind"] = e.kind;
    ev["ts_ms"] = e.ts_ms;
    ev["focus"] = e.focus;
    ev["mode"] = to_string(e.mode);
    if (e.mode_from) ev["mode_from"] = to_string(*e.mode_from);
    if (e.reason) ev["reason"] = to_string(*e.reason);
    ev["emitted"] = e.emitted;
    ev["lines_total"] = e.lines_total;
    ev["range"] = e.range.empty() ? nlohmann::ordered_json(nullptr)
                                  : nlohmann::ordered_json::array({e.range.first(), e.range.last()});
    ev["too_complex_running"] = e.too_complex_running;
    ev["visible_curr"] = errors_json(e.curr.visible);
    ev["visible_prev"] = errors_json(e.prev.visible);
    ev["background_curr"] = errors_json(e.curr.background);
    ev["background_prev"] = errors_json(e.prev.background);
    events.push_back(std::move(ev));
  }
  j["events"] = std::move(events);
  j["forbidden"] = ledger.forbidden;
  return j.dump(1);
}

}  // namespace teletype::sim
