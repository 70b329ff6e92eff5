#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "teletype/analysis/metrics.hpp"
#include "teletype/analysis/svg.hpp"

using namespace teletype;
using namespace teletype::analysis;

namespace {

// 2024-03-01T00:00:00Z
constexpr std::int64_t kT0 = 1'709'251'200'000;

TelemetryRecord rec(std::uint64_t session, std::int64_t ts, Mode mode = Mode::NonStrict,
                    Reason reason = Reason::Keystroke) {
  TelemetryRecord r;
  r.session_id = SessionId(session);
  r.client_ts_ms = ts;
  r.server_ts_ms = ts + 7;
  r.mode = mode;
  r.reason = reason;
  return r;
}

const std::vector<std::string>& row(const Table& t, const std::string& first) {
  for (const auto& r : t.rows) {
    if (r.front() == first) return r;
  }
  FAIL("no row " << first << " in " << t.name);
  static const std::vector<std::string> none;
  return none;
}

std::string at(const Table& t, const std::string& first, const std::string& column) {
  auto c = std::find(t.columns.begin(), t.columns.end(), column) - t.columns.begin();
  return row(t, first).at(static_cast<std::size_t>(c));
}

}  // namespace

TEST_CASE("nearest-rank statistics") {
  std::vector<std::int64_t> one{100};
  auto s = dist_stats(one);
  REQUIRE(s);
  CHECK(s->mean == 100);
  CHECK(s->median == 100);
  CHECK(s->p99 == 100);
  CHECK(s->stddev == 0);

  std::vector<std::int64_t> hundred;
  for (int i = 1; i <= 100; ++i) hundred.push_back(i);
  s = dist_stats(hundred);
  CHECK(s->median == 50);
  CHECK(s->p99 == 99);
  CHECK(s->mean == doctest::Approx(50.5));
  CHECK_FALSE(dist_stats(std::vector<std::int64_t>{}).has_value());
}

TEST_CASE("statistics agree with a two-pass brute force") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::int64_t> xs(rng() % 200 + 1);
    for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 100000) - 20000;
    auto s = dist_stats(xs);
    long double mean = 0;
    for (auto x : xs) mean += x;
    mean /= xs.size();
    long double var = 0;
    for (auto x : xs) var += (x - mean) * (x - mean);
    var /= xs.size();
    CHECK(s->mean == doctest::Approx(static_cast<double>(mean)));
    CHECK(s->stddev == doctest::Approx(static_cast<double>(std::sqrt(var))));
    // Smallest value v with at least q*n samples <= v.
    auto quantile = [&](double q) {
      for (auto v : xs) {
        std::size_t le = std::count_if(xs.begin(), xs.end(), [&](auto y) { return y <= v; });
        std::size_t lt = std::count_if(xs.begin(), xs.end(), [&](auto y) { return y < v; });
        double need = std::ceil(q * xs.size() - 1e-9);
        if (le >= need && lt < need) return v;
      }
      return std::int64_t{-1};
    };
    CHECK(s->median == quantile(0.5));
    CHECK(s->p99 == quantile(0.99));
  }
}

TEST_CASE("records per hour") {
  CHECK(records_per_hour({}).rows.empty());
  std::vector<TelemetryRecord> rs;
  for (int i = 0; i < 5; ++i) rs.push_back(rec(1, kT0 + 3'600'000 + i * 60'000));
  auto t = records_per_hour(rs);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == std::vector<std::string>{"2024-03-01T01:00", "5"});
  // Eight hours west of UTC.
  t = records_per_hour(rs, -480);
  CHECK(t.rows[0][0] == "2024-02-29T17:00");
  // Client time stands in when the server time is missing.
  rs[0].server_ts_ms.reset();
  rs[0].client_ts_ms = kT0;
  CHECK(records_per_hour(rs).rows.size() == 2);
}

TEST_CASE("size statistics skip corrupt edit ranges only") {
  auto a = rec(1, 1), b = rec(1, 2);
  a.lines_total = 100;
  a.lines_edit = 4;
  b.lines_total = 300;
  b.lines_edit.reset();
  std::vector<TelemetryRecord> rs{a, b};
  auto t = size_stats(rs);
  CHECK(at(t, "lines_total", "n") == "2");
  CHECK(at(t, "lines_total", "mean") == "200.000");
  CHECK(at(t, "lines_edit", "n") == "1");
  CHECK(at(t, "lines_edit", "median") == "4");
}

TEST_CASE("session statistics") {
  std::vector<TelemetryRecord> one{rec(1, 5)};
  auto t = session_stats(one);
  CHECK(at(t, "time_span_s", "median") == "0.000");
  CHECK(at(t, "record_count", "median") == "1");
  std::vector<TelemetryRecord> two{rec(2, kT0 + 845'000), rec(2, kT0)};
  t = session_stats(two);
  CHECK(at(t, "time_span_s", "median") == "845.000");
  CHECK(at(t, "time_span_s", "mean") == "845.000");
}

TEST_CASE("error location breakdown") {
  auto r = rec(1, 1);
  r.overall.type_curr = {10, 5, 1};
  std::vector<TelemetryRecord> rs{r};
  auto t = error_location_breakdown(rs);
  CHECK(at(t, "type", "in_module_pct") == "50.00");
  CHECK(at(t, "type", "in_edit_range_pct") == "10.00");
  CHECK(at(t, "bg", "in_module_pct") == "n/a");
  std::vector<TelemetryRecord> zero{rec(1, 1)};
  t = error_location_breakdown(zero);
  CHECK(at(t, "type", "total") == "0");
  CHECK(at(t, "type", "in_module_pct") == "n/a");
}

TEST_CASE("mode distribution") {
  SUBCASE("pure session") {
    std::vector<TelemetryRecord> rs{rec(1, 1), rec(1, 2)};
    auto ts = mode_distribution(rs);
    CHECK(at(ts[1], "nonstrict", "sessions") == "1");
    CHECK(at(ts[2], "upgrade", "count") == "0");
    CHECK(at(ts[2], "downgrade", "count") == "0");
    CHECK(at(ts[0], "nonstrict", "pct") == "100.00");
  }
  SUBCASE("keystroke downgrade") {
    std::vector<TelemetryRecord> rs{rec(1, 1, Mode::Strict), rec(1, 2, Mode::NoCheck)};
    auto ts = mode_distribution(rs);
    CHECK(at(ts[1], "mixed", "sessions") == "1");
    CHECK(at(ts[2], "downgrade", "count") == "1");
    CHECK(at(ts[2], "switch_different_mode", "count") == "0");
  }
  SUBCASE("switch is not a downgrade") {
    std::vector<TelemetryRecord> rs{rec(1, 1, Mode::Strict),
                                    rec(1, 2, Mode::NoCheck, Reason::ModuleSwitch)};
    auto ts = mode_distribution(rs);
    CHECK(at(ts[1], "mixed", "sessions") == "1");
    CHECK(at(ts[2], "downgrade", "count") == "0");
    CHECK(at(ts[2], "switch_different_mode", "count") == "1");
  }
}

TEST_CASE("transition effect") {
  auto a = rec(1, 1, Mode::NoCheck), b = rec(1, 2, Mode::Strict);
  a.overall.type_curr.total = 2;
  b.overall.type_curr.total = 5;
  std::vector<TelemetryRecord> rs{a, b};
  auto t = transition_effect(rs);
  CHECK(at(t, "upgrade", "n") == "1");
  CHECK(at(t, "upgrade", "mean") == "3.000");
  CHECK(at(t, "upgrade", "max") == "3");
  CHECK(at(t, "downgrade", "n") == "0");
  CHECK(at(t, "downgrade", "mean") == "n/a");
}

TEST_CASE("errors by mode") {
  auto r = rec(1, 1);
  r.overall.type_curr.total = 4;
  std::vector<TelemetryRecord> single{r};
  CHECK(at(errors_by_mode(single), "nonstrict", "type_share_pct") == "100.00");

  // One background error per record: shares follow record counts.
  std::vector<TelemetryRecord> rs;
  for (int i = 0; i < 9; ++i) rs.push_back(rec(1, i, Mode::NoCheck));
  rs.push_back(rec(1, 100, Mode::Strict));
  for (auto& x : rs) x.overall.bg_curr.total = 1;
  auto t = errors_by_mode(rs);
  CHECK(at(t, "nocheck", "bg_share_pct") == "90.00");
  CHECK(at(t, "strict", "bg_share_pct") == "10.00");
  CHECK(at(t, "strict", "bg_median") == "1");
  CHECK(at(t, "nonstrict", "bg_median") == "n/a");
}

TEST_CASE("edit delta categorization") {
  auto up = rec(1, 1), same = rec(1, 2), down = rec(1, 3), none = rec(1, 4);
  up.edit_kinds.set(ErrorKind::UnknownProperty, {1, 0});
  same.edit_kinds.set(ErrorKind::UnknownProperty, {2, 2});
  down.edit_kinds.set(ErrorKind::UnknownProperty, {0, 1});
  none.edit_kinds.set(ErrorKind::UnknownProperty, {0, 0});
  auto sw = rec(1, 5, Mode::NonStrict, Reason::ModuleSwitch);
  sw.edit_kinds.set(ErrorKind::UnknownProperty, {5, 0});
  auto corrupt = rec(1, 6);
  corrupt.lines_edit.reset();
  std::vector<TelemetryRecord> rs{up, same, down, none, sw, corrupt};
  auto t = edit_delta_by_kind(rs);
  REQUIRE(t.rows.size() == 1);
  CHECK(at(t, "UnknownProperty", "nonstrict_up") == "1");
  CHECK(at(t, "UnknownProperty", "nonstrict_same") == "1");
  CHECK(at(t, "UnknownProperty", "nonstrict_down") == "1");
  CHECK(at(t, "UnknownProperty", "strict_up") == "0");
  CHECK(classify(0, 0) == Delta::None);
}

TEST_CASE("error popularity") {
  auto r = rec(1, 1, Mode::Strict);
  r.edit_kinds.set(ErrorKind::TypeMismatch, {1, 0});
  r.edit_kinds.set(ErrorKind::UnknownSymbol, {3, 9});
  auto sw = rec(1, 2, Mode::Strict, Reason::ModuleSwitch);
  sw.edit_kinds.set(ErrorKind::UnknownSymbol, {0, 4});
  std::vector<TelemetryRecord> rs{r, sw};
  auto t = error_popularity(rs, Mode::Strict);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<std::string>{"1", "UnknownSymbol", "3", "75.00"});
  CHECK(t.rows[1] == std::vector<std::string>{"2", "TypeMismatch", "1", "25.00"});
  CHECK(error_popularity(rs, Mode::NoCheck).rows.empty());
}

TEST_CASE("density deltas") {
  auto a = rec(1, kT0), b = rec(1, kT0 + 1500);
  a.lines_total = 100;
  a.overall.type_curr.total = a.overall.type_prev.total = 5;
  b.lines_total = 100;
  b.overall.type_curr.total = 7;
  b.overall.type_prev.total = 4;
  auto empty = rec(1, kT0 + 2000);
  std::vector<TelemetryRecord> rs{a, b, empty};
  auto t = density_deltas(rs);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][3] == "0.000000");
  CHECK(t.rows[1][1] == "1.500");
  CHECK(t.rows[1][3] == "0.030000");
}

TEST_CASE("module delta breakdown") {
  auto a = rec(1, 1), b = rec(1, 2);
  a.overall.type_prev.in_module = 2;
  a.overall.type_curr.in_module = 3;
  a.overall.type_prev.total = 2;
  a.overall.type_curr.total = 3;
  std::vector<TelemetryRecord> rs{a, b};
  auto t = module_delta_breakdown(rs);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[2] == std::vector<std::string>{"nonstrict", "type", "1", "1", "0", "0", "100.00", "0.00", "0.00"});
  CHECK(t.rows[3][2] == "0");
  CHECK(t.rows[3][6] == "n/a");
}

TEST_CASE("metrics are invariant under interleaving and repeat runs") {
  std::mt19937_64 rng(9);
  std::vector<TelemetryRecord> rs;
  for (int s = 0; s < 6; ++s) {
    std::int64_t ts = kT0 + s * 1000;
    for (int i = 0; i < 40; ++i) {
      auto r = rec(static_cast<std::uint64_t>(s), ts, static_cast<Mode>(rng() % 3),
                   rng() % 5 ? Reason::Keystroke : Reason::ModuleSwitch);
      ts += static_cast<std::int64_t>(rng() % 900'000);
      r.lines_total = static_cast<std::int64_t>(rng() % 500);
      r.overall.type_curr = {static_cast<std::int64_t>(rng() % 6), 0, 0};
      r.overall.type_prev = {static_cast<std::int64_t>(rng() % 6), 0, 0};
      r.overall.bg_curr = {static_cast<std::int64_t>(rng() % 9), 0, 0};
      r.edit_kinds.set(static_cast<ErrorKind>(rng() % 5), {static_cast<std::int64_t>(rng() % 3), 1});
      rs.push_back(r);
    }
  }
  auto baseline = to_csv(compute_metric("all", rs));
  CHECK(to_csv(compute_metric("all", rs)) == baseline);
  // Shuffle sessions against each other while keeping each session's order.
  std::vector<TelemetryRecord> mixed;
  std::vector<std::size_t> next(6, 0);
  while (mixed.size() < rs.size()) {
    std::size_t s = rng() % 6;
    if (next[s] < 40) mixed.push_back(rs[s * 40 + next[s]++]);
  }
  CHECK(to_csv(compute_metric("all", mixed)) == baseline);

  // Percentages of one breakdown add up to 100 within rounding.
  for (const auto& t : mode_distribution(rs)) {
    if (t.name == "mode_transitions") continue;
    double sum = 0;
    for (const auto& r : t.rows) sum += std::stod(r[2]);
    CHECK(sum == doctest::Approx(100.0).epsilon(0.001));
  }
}

TEST_CASE("rendering") {
  Table a{"first", {"k", "v"}, {{"x", "1"}, {"y,z", "n/a"}}};
  Table b{"second", {"k"}, {}};
  CHECK(to_csv({a, b}) == "# first\nk,v\nx,1\n\"y,z\",n/a\n\n# second\nk\n");
  auto json = nlohmann::json::parse(to_json({a, b}));
  CHECK(json["first"][0]["v"] == 1);
  CHECK(json["first"][1]["v"].is_null());
  CHECK(json["second"].empty());
  CHECK(seconds(845'000) == "845.000");
  CHECK(seconds(1) == "0.001");
  CHECK(percent(1, 3) == "33.33");
  CHECK_THROWS_AS(compute_metric("nope", {}), std::invalid_argument);
}

TEST_CASE("plots") {
  std::vector<TelemetryRecord> rs{rec(1, kT0), rec(1, kT0 + 4'000'000, Mode::Strict)};
  rs[0].lines_total = rs[1].lines_total = 10;
  auto svg = plot_metric("density_deltas", compute_metric("density_deltas", rs));
  CHECK(svg.starts_with("<svg"));
  CHECK(svg.find("<circle") != std::string::npos);
  auto bars = plot_metric("records_per_hour", compute_metric("records_per_hour", rs));
  CHECK(std::count(bars.begin(), bars.end(), '\n') > 5);
  CHECK_THROWS_AS(plot_metric("size_stats", compute_metric("size_stats", rs)), std::invalid_argument);
}

TEST_CASE("session ids stay strings in json") {
  Table t{"density_deltas", {"session_id", "t_rel_s"}, {{"000000000000042", "1.500"}}};
  auto json = nlohmann::json::parse(to_json({t}));
  CHECK(json["density_deltas"][0]["session_id"] == "000000000000042");
  CHECK(json["density_deltas"][0]["t_rel_s"] == 1.5);
}
