#include "teletype/sim/oracle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "teletype/analysis/stats.hpp"

namespace teletype::sim {

namespace {

using analysis::cell;
using analysis::kNotApplicable;
using analysis::percent;
using analysis::Table;

// One emitted record, rebuilt from its ledger event.
struct Row {
  std::uint64_t session = 0;
  std::int64_t ts = 0;
  std::size_t seq = 0;
  int mode = 0;
  bool keystroke = true;
  std::int64_t lines_total = 0;
  std::int64_t lines_edit = 0;
  // [type_curr, type_prev, bg_curr, bg_prev][total, module, edit]
  std::int64_t loc[4][3] = {};
  std::map<int, std::pair<std::int64_t, std::int64_t>> kinds;
};

bool inside(const EditRange& r, const AnalysisError& e) {
  return !r.empty() && e.start_line <= r.last() && e.end_line >= r.first();
}

void tally(const AnalysisResult& result, const LedgerEvent& ev, std::int64_t* out) {
  for (const auto& [module, errors] : result) {
    out[0] += static_cast<std::int64_t>(errors.size());
    if (module != ev.focus) continue;
    out[1] += static_cast<std::int64_t>(errors.size());
    out[2] += std::count_if(errors.begin(), errors.end(), [&](const auto& e) { return inside(ev.range, e); });
  }
}

std::vector<Row> rebuild(std::span<const Ledger> ledgers) {
  std::vector<Row> rows;
  for (const auto& ledger : ledgers) {
    for (const auto& ev : ledger.events) {
      if (!ev.emitted) continue;
      Row r;
      r.session = ledger.session_id.value();
      r.ts = ev.ts_ms;
      r.seq = rows.size();
      r.mode = static_cast<int>(ev.mode);
      r.keystroke = ev.reason == Reason::Keystroke;
      r.lines_total = ev.lines_total;
      r.lines_edit = ev.range.empty() ? 0 : ev.range.last() - ev.range.first() + 1;
      tally(ev.curr.visible, ev, r.loc[0]);
      tally(ev.prev.visible, ev, r.loc[1]);
      tally(ev.curr.background, ev, r.loc[2]);
      tally(ev.prev.background, ev, r.loc[3]);
      const auto focused = [&](const AnalysisResult& res) -> const std::vector<AnalysisError>* {
        auto it = res.find(ev.focus);
        return it == res.end() ? nullptr : &it->second;
      };
      if (const auto* errs = focused(ev.curr.visible)) {
        for (const auto& e : *errs) r.kinds[static_cast<int>(e.kind)].first += inside(ev.range, e);
      }
      if (const auto* errs = focused(ev.prev.visible)) {
        for (const auto& e : *errs) r.kinds[static_cast<int>(e.kind)].second += inside(ev.range, e);
      }
      rows.push_back(std::move(r));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.session, a.ts, a.seq) < std::tie(b.session, b.ts, b.seq);
  });
  return rows;
}

// Consecutive runs of one session in the sorted rows.
template <class F>
void each_session(const std::vector<Row>& rows, F&& f) {
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].session == rows[i].session) ++j;
    f(std::span<const Row>(rows.data() + i, j - i));
    i = j;
  }
}

const char* kModeNames[3] = {"nocheck", "nonstrict", "strict"};

std::vector<std::string> stat_row(const std::string& label, std::vector<std::int64_t> values,
                                  bool as_seconds = false) {
  std::vector<std::string> row{label};
  for (auto& c : analysis::stats_cells(analysis::dist_stats(values), as_seconds)) row.push_back(c);
  return row;
}

// Days since 1970-01-01 to a civil date.
std::tuple<std::int64_t, int, int> civil(std::int64_t days) {
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const std::int64_t doe = days - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  return {yoe + era * 400 + (m <= 2), m, d};
}

}  // namespace

std::vector<Table> oracle_metrics(std::span<const Ledger> ledgers, int tz_offset_min) {
  const std::vector<Row> rows = rebuild(ledgers);
  std::vector<Table> out;
  const std::vector<std::string> stat_cols{"metric", "n", "mean", "stddev", "median", "p99"};

  {
    std::map<std::int64_t, std::int64_t> hours;
    for (const auto& r : rows) {
      const std::int64_t shifted = r.ts + std::int64_t{tz_offset_min} * 60'000;
      std::int64_t h = shifted / 3'600'000;
      if (shifted % 3'600'000 < 0) --h;
      ++hours[h];
    }
    Table t{"records_per_hour", {"hour", "records"}, {}};
    for (const auto& [h, n] : hours) {
      std::int64_t day = h / 24;
      if (h % 24 < 0) --day;
      const auto [y, m, d] = civil(day);
      t.rows.push_back({fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:00", y, m, d, h - day * 24), cell(n)});
    }
    out.push_back(std::move(t));
  }
  {
    std::vector<std::int64_t> total, edit;
    for (const auto& r : rows) {
      total.push_back(r.lines_total);
      edit.push_back(r.lines_edit);
    }
    out.push_back({"size_stats", stat_cols, {stat_row("lines_total", total), stat_row("lines_edit", edit)}});
  }
  {
    std::vector<std::int64_t> spans, counts;
    each_session(rows, [&](std::span<const Row> s) {
      std::int64_t lo = s[0].ts, hi = s[0].ts;
      for (const auto& r : s) {
        lo = std::min(lo, r.ts);
        hi = std::max(hi, r.ts);
      }
      spans.push_back(hi - lo);
      counts.push_back(static_cast<std::int64_t>(s.size()));
    });
    out.push_back({"session_stats", stat_cols,
                   {stat_row("time_span_s", spans, true), stat_row("record_count", counts)}});
  }
  {
    Table t{"error_location_breakdown",
            {"analysis", "total", "in_module", "in_module_pct", "in_edit_range", "in_edit_range_pct"},
            {}};
    for (int a : {0, 2}) {
      std::int64_t c[3] = {};
      for (const auto& r : rows) {
        for (int k = 0; k < 3; ++k) c[k] += r.loc[a][k];
      }
      t.rows.push_back({a == 0 ? "type" : "bg", cell(c[0]), cell(c[1]), percent(c[1], c[0]), cell(c[2]),
                        percent(c[2], c[0])});
    }
    out.push_back(std::move(t));
  }

  // Mode changes between adjacent keystroke records of one session.
  struct Change {
    bool up;
    std::int64_t delta;
    std::uint64_t session;
  };
  std::vector<Change> changes;
  std::int64_t switch_changes = 0;
  std::set<std::uint64_t> switch_sessions;
  std::int64_t sessions = 0;
  std::int64_t session_class[4] = {};
  each_session(rows, [&](std::span<const Row> s) {
    ++sessions;
    int seen = 0;
    for (const auto& r : s) seen |= 1 << r.mode;
    session_class[seen == 1 ? 0 : seen == 2 ? 1 : seen == 4 ? 2 : 3] += 1;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const Row& a = s[i];
      const Row& b = s[i + 1];
      if (!b.keystroke && b.mode != a.mode) {
        ++switch_changes;
        switch_sessions.insert(b.session);
      }
      if (a.keystroke && b.keystroke && a.mode != b.mode) {
        changes.push_back({b.mode > a.mode, b.loc[0][0] - a.loc[0][0], b.session});
      }
    }
  });
  {
    std::int64_t per_mode[3] = {};
    for (const auto& r : rows) ++per_mode[r.mode];
    Table t{"mode_records", {"mode", "records", "pct"}, {}};
    for (int m = 0; m < 3; ++m) {
      t.rows.push_back({kModeNames[m], cell(per_mode[m]), percent(per_mode[m], static_cast<std::int64_t>(rows.size()))});
    }
    out.push_back(std::move(t));
    Table c{"mode_sessions", {"class", "sessions", "pct"}, {}};
    for (int k = 0; k < 4; ++k) {
      c.rows.push_back({k < 3 ? kModeNames[k] : "mixed", cell(session_class[k]), percent(session_class[k], sessions)});
    }
    out.push_back(std::move(c));
    Table tr{"mode_transitions", {"transition", "count", "sessions"}, {}};
    for (bool up : {true, false}) {
      std::int64_t n = 0;
      std::set<std::uint64_t> in;
      for (const auto& ch : changes) {
        if (ch.up != up) continue;
        ++n;
        in.insert(ch.session);
      }
      tr.rows.push_back({up ? "upgrade" : "downgrade", cell(n), cell(static_cast<std::int64_t>(in.size()))});
    }
    tr.rows.push_back({"switch_different_mode", cell(switch_changes),
                       cell(static_cast<std::int64_t>(switch_sessions.size()))});
    out.push_back(std::move(tr));
  }
  {
    Table t{"transition_effect", {"transition", "n", "mean", "stddev", "median", "p99", "min", "max"}, {}};
    for (bool up : {true, false}) {
      std::vector<std::int64_t> d;
      for (const auto& ch : changes) {
        if (ch.up == up) d.push_back(ch.delta);
      }
      auto row = stat_row(up ? "upgrade" : "downgrade", d);
      if (d.empty()) {
        row.push_back(kNotApplicable);
        row.push_back(kNotApplicable);
      } else {
        row.push_back(cell(*std::min_element(d.begin(), d.end())));
        row.push_back(cell(*std::max_element(d.begin(), d.end())));
      }
      t.rows.push_back(std::move(row));
    }
    out.push_back(std::move(t));
  }
  {
    Table t{"errors_by_mode",
            {"mode", "records", "type_errors", "type_share_pct", "bg_errors", "bg_share_pct", "bg_median"},
            {}};
    std::int64_t type_all = 0, bg_all = 0;
    for (const auto& r : rows) {
      type_all += r.loc[0][0];
      bg_all += r.loc[2][0];
    }
    for (int m = 0; m < 3; ++m) {
      std::int64_t n = 0, type = 0, bg = 0;
      std::vector<std::int64_t> bgs;
      for (const auto& r : rows) {
        if (r.mode != m) continue;
        ++n;
        type += r.loc[0][0];
        bg += r.loc[2][0];
        bgs.push_back(r.loc[2][0]);
      }
      auto s = analysis::dist_stats(bgs);
      t.rows.push_back({kModeNames[m], cell(n), cell(type), percent(type, type_all), cell(bg),
                        percent(bg, bg_all), s ? cell(s->median) : kNotApplicable});
    }
    out.push_back(std::move(t));
  }
  {
    Table t{"edit_delta_by_kind", {"kind"}, {}};
    for (const char* m : kModeNames) {
      for (const char* d : {"up", "same", "down"}) t.columns.push_back(fmt::format("{}_{}", m, d));
    }
    for (ErrorKind kind : all_error_kinds()) {
      std::int64_t c[3][3] = {};
      bool any = false;
      for (const auto& r : rows) {
        if (!r.keystroke) continue;
        auto it = r.kinds.find(static_cast<int>(kind));
        if (it == r.kinds.end()) continue;
        const auto [curr, prev] = it->second;
        int d = curr > prev ? 0 : curr < prev ? 2 : curr > 0 ? 1 : -1;
        if (d < 0) continue;
        ++c[r.mode][d];
        any = true;
      }
      if (!any) continue;
      std::vector<std::string> row{std::string(to_string(kind))};
      for (auto& per_mode : c) {
        for (std::int64_t v : per_mode) row.push_back(cell(v));
      }
      t.rows.push_back(std::move(row));
    }
    out.push_back(std::move(t));
  }
  for (int m = 0; m < 3; ++m) {
    std::vector<std::pair<std::int64_t, int>> ranked;  // (-count, kind)
    std::int64_t total = 0;
    for (ErrorKind kind : all_error_kinds()) {
      std::int64_t n = 0;
      for (const auto& r : rows) {
        if (r.mode != m) continue;
        auto it = r.kinds.find(static_cast<int>(kind));
        if (it != r.kinds.end()) n += it->second.first;
      }
      if (n > 0) ranked.emplace_back(-n, static_cast<int>(kind));
      total += n;
    }
    std::sort(ranked.begin(), ranked.end());
    Table t{fmt::format("error_popularity_{}", kModeNames[m]), {"rank", "kind", "count", "pct"}, {}};
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      t.rows.push_back({cell(static_cast<std::int64_t>(i) + 1),
                        std::string(to_string(static_cast<ErrorKind>(ranked[i].second))),
                        cell(-ranked[i].first), percent(-ranked[i].first, total)});
    }
    out.push_back(std::move(t));
  }
  {
    Table t{"density_deltas", {"session_id", "t_rel_s", "mode", "delta_density"}, {}};
    each_session(rows, [&](std::span<const Row> s) {
      for (const auto& r : s) {
        if (!r.keystroke || r.lines_total <= 0) continue;
        const double delta = static_cast<double>(r.loc[0][0] - r.loc[1][0]) / static_cast<double>(r.lines_total);
        t.rows.push_back({SessionId(r.session).str(), analysis::seconds(r.ts - s[0].ts), kModeNames[r.mode],
                          analysis::fixed6(delta)});
      }
    });
    out.push_back(std::move(t));
  }
  {
    Table t{"module_delta_breakdown",
            {"mode", "analysis", "n", "up", "same", "down", "up_pct", "same_pct", "down_pct"},
            {}};
    for (int m = 0; m < 3; ++m) {
      for (int a : {0, 2}) {
        std::int64_t up = 0, same = 0, down = 0;
        for (const auto& r : rows) {
          if (!r.keystroke || r.mode != m) continue;
          const std::int64_t curr = r.loc[a][1], prev = r.loc[a + 1][1];
          if (curr > prev) {
            ++up;
          } else if (curr < prev) {
            ++down;
          } else if (curr != 0) {
            ++same;
          }
        }
        const std::int64_t n = up + same + down;
        t.rows.push_back({kModeNames[m], a == 0 ? "type" : "bg", cell(n), cell(up), cell(same), cell(down),
                          percent(up, n), percent(same, n), percent(down, n)});
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace teletype::sim
