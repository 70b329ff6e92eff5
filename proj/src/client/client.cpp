#include "teletype/client/client.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace teletype::client {

ClientConfig load_client_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  ClientConfig config;
  try {
    auto j = nlohmann::json::parse(in);
    config.sampler.p_session = j.value("p_session", config.sampler.p_session);
    config.sampler.p_event = j.value("p_event", config.sampler.p_event);
    config.sampler.seed = j.value("seed", config.sampler.seed);
    config.budget.max_steps = j.value("max_steps", config.budget.max_steps);
    config.sink = j.value("sink", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
  return config;
}

std::vector<ErrorSite> error_sites(const AnalysisResult& result, const std::string& current_module) {
  std::vector<ErrorSite> sites;
  for (const auto& [module, errors] : result) {
    for (const auto& e : errors) {
      sites.push_back({e.kind, module == current_module, e.start_line, e.end_line});
    }
  }
  return sites;
}

namespace {

LocCounts count(const std::vector<ErrorSite>& sites, EditRange range) {
  LocCounts c;
  for (const auto& s : sites) {
    ++c.total;
    if (!s.in_current_module) continue;
    ++c.in_module;
    if (overlaps(range, s.start_line, s.end_line)) ++c.in_edit_range;
  }
  return c;
}

std::map<ErrorKind, std::int64_t> per_kind(const std::vector<ErrorSite>& sites, EditRange range) {
  std::map<ErrorKind, std::int64_t> out;
  for (const auto& s : sites) {
    if (s.in_current_module && overlaps(range, s.start_line, s.end_line)) ++out[s.kind];
  }
  return out;
}

}  // namespace

TelemetryRecord build_record(const RecordInputs& in) {
  TelemetryRecord r;
  r.session_id = in.session_id;
  r.client_ts_ms = in.client_ts_ms;
  r.mode = in.mode;
  r.reason = in.reason;
  r.lines_total = in.lines_total;
  r.lines_edit = in.edit_range.width();
  r.overall.type_curr = count(in.type_curr, in.edit_range);
  r.overall.type_prev = count(in.type_prev, in.edit_range);
  r.overall.bg_curr = count(in.bg_curr, in.edit_range);
  r.overall.bg_prev = count(in.bg_prev, in.edit_range);
  r.overall.too_complex_total = in.too_complex_total;
  auto curr = per_kind(in.type_curr, in.edit_range);
  auto prev = per_kind(in.type_prev, in.edit_range);
  for (ErrorKind k : all_error_kinds()) {
    KindPair pair{curr.contains(k) ? curr[k] : 0, prev.contains(k) ? prev[k] : 0};
    r.edit_kinds.set(k, pair);
  }
  return r;
}

TelemetryClient::TelemetryClient(analyzer::Project project, const ClientConfig& config,
                                 RecordSink& sink, Clock clock)
    : project_(std::move(project)),
      analyzer_(config.budget),
      sampler_(config.sampler),
      enrollment_(sampler_.enroll_session()),
      sink_(sink),
      clock_(std::move(clock)) {
  analyze();
  prev_ = curr_;
}

void TelemetryClient::open(const std::string& module_id) {
  if (!project_.contains(module_id)) {
    throw std::invalid_argument(fmt::format("unknown module '{}'", module_id));
  }
  current_ = module_id;
  range_ = reset(range_);
}

void TelemetryClient::analyze() {
  prev_ = std::move(curr_);
  curr_ = analyzer_.analyze(project_);
  too_complex_running_ += static_cast<std::int64_t>(analyzer::too_complex_count(curr_.visible) +
                                                    analyzer::too_complex_count(curr_.background));
}

std::optional<TelemetryRecord> TelemetryClient::on_edit(const TextEdit& edit) {
  if (current_.empty()) throw std::logic_error("no module is open");
  auto& lines = project_.modules.at(current_).lines;
  const int n = static_cast<int>(lines.size());

  EditOp op;
  if (const auto* ins = std::get_if<InsertText>(&edit)) {
    if (ins->lines.empty() || ins->at < 1 || ins->at > n + 1) {
      throw std::invalid_argument(fmt::format("cannot insert at line {} of {}", ins->at, n));
    }
    lines.insert(lines.begin() + (ins->at - 1), ins->lines.begin(), ins->lines.end());
    op = InsertLines{ins->at, static_cast<int>(ins->lines.size())};
  } else if (const auto* del = std::get_if<DeleteText>(&edit)) {
    if (del->count < 1 || del->from < 1 || del->from > n) {
      throw std::invalid_argument(fmt::format("cannot delete from line {} of {}", del->from, n));
    }
    const int count = std::min(del->count, n - del->from + 1);
    lines.erase(lines.begin() + (del->from - 1), lines.begin() + (del->from - 1 + count));
    op = DeleteLines{del->from, count};
  } else {
    const auto& rep = std::get<ReplaceLine>(edit);
    if (rep.line < 1 || rep.line > n) {
      throw std::invalid_argument(fmt::format("cannot replace line {} of {}", rep.line, n));
    }
    lines[rep.line - 1] = rep.text;
    op = ModifyLines{rep.line, rep.line};
  }

  range_ = apply_edit(range_, op);
  analyze();
  if (!enrolled() || !sampler_.sample_event()) return std::nullopt;
  TelemetryRecord record = make_record(Reason::Keystroke);
  emit(record);
  range_ = reset(range_);
  return record;
}

std::optional<TelemetryRecord> TelemetryClient::on_module_switch(const std::string& target) {
  if (!project_.contains(target)) {
    throw std::invalid_argument(fmt::format("unknown module '{}'", target));
  }
  if (target == current_) throw std::invalid_argument(fmt::format("'{}' already has focus", target));
  std::optional<TelemetryRecord> record;
  if (enrolled() && !current_.empty()) {
    record = make_record(Reason::ModuleSwitch);
    emit(*record);
  }
  current_ = target;
  range_ = reset(range_);
  return record;
}

TelemetryRecord TelemetryClient::make_record(Reason reason) const {
  RecordInputs in;
  in.session_id = enrollment_.session_id;
  in.client_ts_ms = clock_();
  in.mode = project_.module(current_).mode();
  in.reason = reason;
  in.lines_total = project_.line_count();
  in.edit_range = range_;
  in.type_curr = error_sites(curr_.visible, current_);
  in.type_prev = error_sites(prev_.visible, current_);
  in.bg_curr = error_sites(curr_.background, current_);
  in.bg_prev = error_sites(prev_.background, current_);
  in.too_complex_total = too_complex_running_;
  return build_record(in);
}

void TelemetryClient::emit(const TelemetryRecord& record) { sink_.deliver(record); }

}  // namespace teletype::client
