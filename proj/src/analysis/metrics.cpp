#include "teletype/analysis/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <ctime>
#include <map>
#include <set>
#include <stdexcept>

namespace teletype::analysis {

namespace {

constexpr std::array kModes{Mode::NoCheck, Mode::NonStrict, Mode::Strict};

std::size_t mode_index(Mode m) { return static_cast<std::size_t>(m); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

std::string str(std::string_view s) { return std::string(s); }

std::vector<std::string> with_stats(std::string label, const std::optional<DistStats>& s,
                                    bool as_seconds = false) {
  std::vector<std::string> row{std::move(label)};
  auto cells = stats_cells(s, as_seconds);
  row.insert(row.end(), cells.begin(), cells.end());
  return row;
}

const std::vector<std::string> kStatsColumns{"n", "mean", "stddev", "median", "p99"};

std::vector<std::string> stats_header(std::string first) {
  std::vector<std::string> cols{std::move(first)};
  cols.insert(cols.end(), kStatsColumns.begin(), kStatsColumns.end());
  return cols;
}

// Adjacent keystroke pairs whose mode changed, per session.
struct Transition {
  bool upgrade;
  std::int64_t delta;
};

std::vector<Transition> transitions_of(const SessionGroup& g) {
  std::vector<Transition> out;
  for (std::size_t i = 1; i < g.records.size(); ++i) {
    const auto& a = g.records[i - 1];
    const auto& b = g.records[i];
    if (a.reason != Reason::Keystroke || b.reason != Reason::Keystroke || a.mode == b.mode) continue;
    out.push_back({b.mode > a.mode, b.overall.type_curr.total - a.overall.type_curr.total});
  }
  return out;
}

}  // namespace

std::int64_t SessionGroup::span_ms() const {
  if (records.empty()) return 0;
  return records.back().client_ts_ms - records.front().client_ts_ms;
}

std::vector<SessionGroup> group_sessions(std::span<const TelemetryRecord> records) {
  std::map<SessionId, std::vector<TelemetryRecord>> by_id;
  for (const auto& r : records) by_id[r.session_id].push_back(r);
  std::vector<SessionGroup> out;
  for (auto& [id, rs] : by_id) {
    std::stable_sort(rs.begin(), rs.end(),
                     [](const auto& a, const auto& b) { return a.client_ts_ms < b.client_ts_ms; });
    out.push_back({id, std::move(rs)});
  }
  return out;
}

Delta classify(std::int64_t curr, std::int64_t prev) {
  if (curr > prev) return Delta::Up;
  if (curr < prev) return Delta::Down;
  return curr == 0 ? Delta::None : Delta::Same;
}

std::string_view session_class_name(std::optional<Mode> pure_mode) {
  return pure_mode ? to_string(*pure_mode) : "mixed";
}

std::int64_t bucket_time_ms(const TelemetryRecord& r) { return r.server_ts_ms.value_or(r.client_ts_ms); }

std::string hour_label(std::int64_t ts_ms, int tz_offset_min) {
  const std::int64_t hour = floor_div(ts_ms + std::int64_t{tz_offset_min} * 60'000, 3'600'000);
  std::time_t secs = static_cast<std::time_t>(hour * 3600);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:00", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                     tm.tm_hour);
}

Table records_per_hour(std::span<const TelemetryRecord> records, int tz_offset_min) {
  std::map<std::int64_t, std::int64_t> buckets;
  for (const auto& r : records) {
    ++buckets[floor_div(bucket_time_ms(r) + std::int64_t{tz_offset_min} * 60'000, 3'600'000)];
  }
  Table t{"records_per_hour", {"hour", "records"}, {}};
  for (const auto& [hour, n] : buckets) {
    // Label from the bucket start in shifted time.
    t.rows.push_back({hour_label(hour * 3'600'000, 0), cell(n)});
  }
  return t;
}

Table size_stats(std::span<const TelemetryRecord> records) {
  std::vector<std::int64_t> total, edit;
  for (const auto& r : records) {
    total.push_back(r.lines_total);
    if (r.lines_edit) edit.push_back(*r.lines_edit);
  }
  Table t{"size_stats", stats_header("metric"), {}};
  t.rows.push_back(with_stats("lines_total", dist_stats(total)));
  t.rows.push_back(with_stats("lines_edit", dist_stats(edit)));
  return t;
}

Table session_stats(std::span<const TelemetryRecord> records) {
  std::vector<std::int64_t> spans, counts;
  for (const auto& g : group_sessions(records)) {
    spans.push_back(g.span_ms());
    counts.push_back(static_cast<std::int64_t>(g.records.size()));
  }
  Table t{"session_stats", stats_header("metric"), {}};
  t.rows.push_back(with_stats("time_span_s", dist_stats(spans), true));
  t.rows.push_back(with_stats("record_count", dist_stats(counts)));
  return t;
}

Table error_location_breakdown(std::span<const TelemetryRecord> records) {
  LocCounts type{}, bg{};
  for (const auto& r : records) {
    type.total += r.overall.type_curr.total;
    type.in_module += r.overall.type_curr.in_module;
    bg.total += r.overall.bg_curr.total;
    bg.in_module += r.overall.bg_curr.in_module;
    // A corrupt edit range says nothing about what lies inside it.
    if (!r.edit_corrupt()) {
      type.in_edit_range += r.overall.type_curr.in_edit_range;
      bg.in_edit_range += r.overall.bg_curr.in_edit_range;
    }
  }
  Table t{"error_location_breakdown",
          {"analysis", "total", "in_module", "in_module_pct", "in_edit_range", "in_edit_range_pct"},
          {}};
  for (const auto& [name, c] : {std::pair{"type", type}, std::pair{"bg", bg}}) {
    t.rows.push_back({name, cell(c.total), cell(c.in_module), percent(c.in_module, c.total),
                      cell(c.in_edit_range), percent(c.in_edit_range, c.total)});
  }
  return t;
}

std::vector<Table> mode_distribution(std::span<const TelemetryRecord> records) {
  std::array<std::int64_t, 3> per_mode{};
  for (const auto& r : records) ++per_mode[mode_index(r.mode)];
  const auto n_records = static_cast<std::int64_t>(records.size());
  Table by_record{"mode_records", {"mode", "records", "pct"}, {}};
  for (Mode m : kModes) {
    by_record.rows.push_back({str(to_string(m)), cell(per_mode[mode_index(m)]),
                              percent(per_mode[mode_index(m)], n_records)});
  }

  std::array<std::int64_t, 4> classes{};  // three pure modes, then mixed
  std::int64_t upgrades = 0, downgrades = 0, switches = 0;
  std::int64_t upgrade_sessions = 0, downgrade_sessions = 0, switch_sessions = 0;
  const auto groups = group_sessions(records);
  for (const auto& g : groups) {
    std::set<Mode> modes;
    for (const auto& r : g.records) modes.insert(r.mode);
    ++classes[modes.size() == 1 ? mode_index(*modes.begin()) : 3];

    std::int64_t up = 0, down = 0, sw = 0;
    for (const auto& tr : transitions_of(g)) (tr.upgrade ? up : down) += 1;
    for (std::size_t i = 1; i < g.records.size(); ++i) {
      if (g.records[i].reason == Reason::ModuleSwitch && g.records[i].mode != g.records[i - 1].mode) ++sw;
    }
    upgrades += up;
    downgrades += down;
    switches += sw;
    upgrade_sessions += up > 0;
    downgrade_sessions += down > 0;
    switch_sessions += sw > 0;
  }
  const auto n_sessions = static_cast<std::int64_t>(groups.size());
  Table by_session{"mode_sessions", {"class", "sessions", "pct"}, {}};
  for (std::size_t c = 0; c < 4; ++c) {
    auto name = c < 3 ? session_class_name(kModes[c]) : session_class_name(std::nullopt);
    by_session.rows.push_back({str(name), cell(classes[c]), percent(classes[c], n_sessions)});
  }
  Table trans{"mode_transitions", {"transition", "count", "sessions"}, {}};
  trans.rows.push_back({"upgrade", cell(upgrades), cell(upgrade_sessions)});
  trans.rows.push_back({"downgrade", cell(downgrades), cell(downgrade_sessions)});
  trans.rows.push_back({"switch_different_mode", cell(switches), cell(switch_sessions)});
  return {by_record, by_session, trans};
}

Table transition_effect(std::span<const TelemetryRecord> records) {
  std::vector<std::int64_t> up, down;
  for (const auto& g : group_sessions(records)) {
    for (const auto& tr : transitions_of(g)) (tr.upgrade ? up : down).push_back(tr.delta);
  }
  auto cols = stats_header("transition");
  cols.push_back("min");
  cols.push_back("max");
  Table t{"transition_effect", cols, {}};
  for (const auto& [name, values] : {std::pair{"upgrade", &up}, std::pair{"downgrade", &down}}) {
    auto s = dist_stats(*values);
    auto row = with_stats(name, s);
    row.push_back(s ? cell(s->min) : kNotApplicable);
    row.push_back(s ? cell(s->max) : kNotApplicable);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table errors_by_mode(std::span<const TelemetryRecord> records) {
  std::array<std::int64_t, 3> n{}, type{}, bg{};
  std::array<std::vector<std::int64_t>, 3> bg_counts;
  std::int64_t type_all = 0, bg_all = 0;
  for (const auto& r : records) {
    auto i = mode_index(r.mode);
    ++n[i];
    type[i] += r.overall.type_curr.total;
    bg[i] += r.overall.bg_curr.total;
    bg_counts[i].push_back(r.overall.bg_curr.total);
    type_all += r.overall.type_curr.total;
    bg_all += r.overall.bg_curr.total;
  }
  Table t{"errors_by_mode",
          {"mode", "records", "type_errors", "type_share_pct", "bg_errors", "bg_share_pct", "bg_median"},
          {}};
  for (Mode m : kModes) {
    auto i = mode_index(m);
    auto s = dist_stats(bg_counts[i]);
    t.rows.push_back({str(to_string(m)), cell(n[i]), cell(type[i]), percent(type[i], type_all),
                      cell(bg[i]), percent(bg[i], bg_all), s ? cell(s->median) : kNotApplicable});
  }
  return t;
}

Table edit_delta_by_kind(std::span<const TelemetryRecord> records) {
  // counts[kind][mode][up, same, down]
  std::map<ErrorKind, std::array<std::array<std::int64_t, 3>, 3>> counts;
  for (const auto& r : records) {
    if (r.reason != Reason::Keystroke || r.edit_corrupt()) continue;
    for (const auto& [kind, pair] : r.edit_kinds.entries()) {
      Delta d = classify(pair.curr, pair.prev);
      if (d == Delta::None) continue;
      ++counts[kind][mode_index(r.mode)][static_cast<std::size_t>(d)];
    }
  }
  Table t{"edit_delta_by_kind", {"kind"}, {}};
  for (Mode m : kModes) {
    for (const char* suffix : {"up", "same", "down"}) {
      t.columns.push_back(fmt::format("{}_{}", to_string(m), suffix));
    }
  }
  for (const auto& [kind, per_mode] : counts) {
    std::vector<std::string> row{str(to_string(kind))};
    for (const auto& triple : per_mode) {
      for (std::int64_t v : triple) row.push_back(cell(v));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table error_popularity(std::span<const TelemetryRecord> records, Mode mode) {
  std::map<ErrorKind, std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& r : records) {
    if (r.mode != mode) continue;
    for (const auto& [kind, pair] : r.edit_kinds.entries()) {
      if (pair.curr == 0) continue;
      counts[kind] += pair.curr;
      total += pair.curr;
    }
  }
  std::vector<std::pair<ErrorKind, std::int64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Table t{fmt::format("error_popularity_{}", to_string(mode)), {"rank", "kind", "count", "pct"}, {}};
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    t.rows.push_back({cell(static_cast<std::int64_t>(i + 1)), str(to_string(ranked[i].first)),
                      cell(ranked[i].second), percent(ranked[i].second, total)});
  }
  return t;
}

Table density_deltas(std::span<const TelemetryRecord> records) {
  Table t{"density_deltas", {"session_id", "t_rel_s", "mode", "delta_density"}, {}};
  for (const auto& g : group_sessions(records)) {
    const std::int64_t start = g.records.front().client_ts_ms;
    for (const auto& r : g.records) {
      if (r.reason != Reason::Keystroke || r.lines_total <= 0) continue;
      const double delta = static_cast<double>(r.overall.type_curr.total - r.overall.type_prev.total) /
                           static_cast<double>(r.lines_total);
      t.rows.push_back({g.session_id.str(), seconds(r.client_ts_ms - start), str(to_string(r.mode)),
                        fixed6(delta)});
    }
  }
  return t;
}

Table module_delta_breakdown(std::span<const TelemetryRecord> records) {
  // counts[mode][analysis][up, same, down]
  std::array<std::array<std::array<std::int64_t, 3>, 2>, 3> counts{};
  for (const auto& r : records) {
    if (r.reason != Reason::Keystroke) continue;
    auto& per_mode = counts[mode_index(r.mode)];
    Delta type = classify(r.overall.type_curr.in_module, r.overall.type_prev.in_module);
    Delta bg = classify(r.overall.bg_curr.in_module, r.overall.bg_prev.in_module);
    if (type != Delta::None) ++per_mode[0][static_cast<std::size_t>(type)];
    if (bg != Delta::None) ++per_mode[1][static_cast<std::size_t>(bg)];
  }
  Table t{"module_delta_breakdown",
          {"mode", "analysis", "n", "up", "same", "down", "up_pct", "same_pct", "down_pct"},
          {}};
  for (Mode m : kModes) {
    for (std::size_t a = 0; a < 2; ++a) {
      const auto& c = counts[mode_index(m)][a];
      const std::int64_t n = c[0] + c[1] + c[2];
      t.rows.push_back({str(to_string(m)), a == 0 ? "type" : "bg", cell(n), cell(c[0]), cell(c[1]),
                        cell(c[2]), percent(c[0], n), percent(c[1], n), percent(c[2], n)});
    }
  }
  return t;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> kNames{
      "records_per_hour", "size_stats",       "session_stats",       "error_location_breakdown",
      "mode_distribution", "transition_effect", "errors_by_mode",     "edit_delta_by_kind",
      "error_popularity",  "density_deltas",   "module_delta_breakdown"};
  return kNames;
}

std::vector<Table> compute_metric(const std::string& name, std::span<const TelemetryRecord> records,
                                  const MetricOptions& options) {
  if (name == "all") {
    std::vector<Table> out;
    for (const auto& n : metric_names()) {
      auto tables = compute_metric(n, records, options);
      out.insert(out.end(), tables.begin(), tables.end());
    }
    return out;
  }
  if (name == "records_per_hour") return {records_per_hour(records, options.tz_offset_min)};
  if (name == "size_stats") return {size_stats(records)};
  if (name == "session_stats") return {session_stats(records)};
  if (name == "error_location_breakdown") return {error_location_breakdown(records)};
  if (name == "mode_distribution") return mode_distribution(records);
  if (name == "transition_effect") return {transition_effect(records)};
  if (name == "errors_by_mode") return {errors_by_mode(records)};
  if (name == "edit_delta_by_kind") return {edit_delta_by_kind(records)};
  if (name == "error_popularity") {
    if (options.mode) return {error_popularity(records, *options.mode)};
    std::vector<Table> out;
    for (Mode m : kModes) out.push_back(error_popularity(records, m));
    return out;
  }
  if (name == "density_deltas") return {density_deltas(records)};
  if (name == "module_delta_breakdown") return {module_delta_breakdown(records)};
  throw std::invalid_argument(fmt::format("unknown metric '{}'", name));
}

}  // namespace teletype::analysis
