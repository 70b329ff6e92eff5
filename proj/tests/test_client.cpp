#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "support/projects.hpp"
#include "teletype/client/client.hpp"
#include "teletype/wire.hpp"

using namespace teletype;
using namespace teletype::client;
using fixtures::project_of;

namespace {

ClientConfig always(double p_event = 1.0) {
  ClientConfig c;
  c.sampler = {1.0, p_event, 17};
  return c;
}

struct FakeClock {
  std::int64_t now = 1'700'000'000'000;
  Clock fn() {
    return [this] { return now; };
  }
};

}  // namespace

TEST_CASE("build_record counts by location") {
  RecordInputs in;
  in.edit_range = EditRange::interval(10, 12);
  in.type_curr = {{ErrorKind::TypeMismatch, false, 1, 1},
                  {ErrorKind::UnknownSymbol, false, 11, 11},
                  {ErrorKind::UnknownSymbol, true, 3, 3}};
  auto r = build_record(in);
  CHECK(r.overall.type_curr == LocCounts{3, 1, 0});
  CHECK(r.edit_kinds.empty());
  CHECK(r.lines_edit == 3);
}

TEST_CASE("strict snippet inside the edit range") {
  auto p = fixtures::snippet_project(fixtures::kStrictSnippet);
  RecordInputs in;
  in.edit_range = EditRange::interval(1, 5);
  in.type_curr = error_sites(analyzer::visible_check(p), "Main");
  auto r = build_record(in);
  CHECK(r.overall.type_curr == LocCounts{2, 2, 2});
  CHECK(r.edit_kinds.get(ErrorKind::TypeMismatch).curr == 1);
  CHECK(r.edit_kinds.get(ErrorKind::UnknownProperty).curr == 1);
  CHECK(r.edit_kinds.size() == 2);
}

TEST_CASE("an edit introducing x.r is reported as a new UnknownProperty") {
  auto p = project_of({{"Main", "--!nonstrict\nlocal x = { p = 5, q = nil }\n"}});
  MemorySink sink;
  FakeClock clock;
  TelemetryClient c(p, always(), sink, clock.fn());
  c.open("Main");
  auto r = c.on_edit(InsertText{3, {"local z = x.r"}});
  REQUIRE(r.has_value());
  CHECK(r->edit_kinds.get(ErrorKind::UnknownProperty) == KindPair{1, 0});
  CHECK(r->reason == Reason::Keystroke);
  CHECK(r->mode == Mode::NonStrict);
  CHECK(r->lines_edit == 1);
  CHECK(r->lines_total == 3);
  CHECK(r->client_ts_ms == clock.now);
  CHECK(sink.records().size() == 1);
  CHECK(c.edit_range().empty());
}

TEST_CASE("p_event zero emits nothing but keeps analyzing") {
  auto p = project_of({{"Main", "--!strict\nlocal a = 1\n"}});
  MemorySink sink;
  FakeClock clock;
  TelemetryClient c(p, always(0.0), sink, clock.fn());
  c.open("Main");
  CHECK_FALSE(c.on_edit(InsertText{3, {"local b = nope"}}).has_value());
  CHECK(c.current().visible.at("Main").size() == 1);
  CHECK(c.edit_range() == EditRange::interval(3, 3));
  CHECK(sink.records().empty());
}

TEST_CASE("module switch records the outgoing module and is never sampled") {
  auto p = project_of({{"S", "--!strict\nlocal a = 1\n"}, {"N", "--!nocheck\nlocal b = 2\n"}});
  MemorySink sink;
  FakeClock clock;
  TelemetryClient c(p, always(0.0), sink, clock.fn());
  c.open("S");
  auto sw = c.on_module_switch("N");
  REQUIRE(sw.has_value());
  CHECK(sw->mode == Mode::Strict);
  CHECK(sw->reason == Reason::ModuleSwitch);
  CHECK(sw->lines_edit == 0);
  CHECK(c.current_module() == "N");
  CHECK_THROWS_AS(c.on_module_switch("Nope"), std::invalid_argument);
  CHECK_THROWS_AS(c.on_module_switch("N"), std::invalid_argument);
  CHECK(c.current_module() == "N");
  CHECK(sink.records().size() == 1);
}

TEST_CASE("switch then edit shows both modes") {
  auto p = project_of({{"S", "--!strict\nlocal a = 1\n"}, {"N", "--!nocheck\nlocal b = 2\n"}});
  MemorySink sink;
  FakeClock clock;
  TelemetryClient c(p, always(), sink, clock.fn());
  c.open("S");
  c.on_module_switch("N");
  c.on_edit(ReplaceLine{2, "local b = 3"});
  REQUIRE(sink.records().size() == 2);
  CHECK(sink.records()[0].mode == Mode::Strict);
  CHECK(sink.records()[0].reason == Reason::ModuleSwitch);
  CHECK(sink.records()[1].mode == Mode::NoCheck);
  CHECK(sink.records()[1].reason == Reason::Keystroke);
}

TEST_CASE("bad edits leave the session untouched") {
  auto p = project_of({{"M", "local a = 1\n"}});
  MemorySink sink;
  FakeClock clock;
  TelemetryClient c(p, always(), sink, clock.fn());
  CHECK_THROWS_AS(c.on_edit(ReplaceLine{1, "x"}), std::logic_error);
  c.open("M");
  CHECK_THROWS_AS(c.on_edit(ReplaceLine{2, "x"}), std::invalid_argument);
  CHECK_THROWS_AS(c.on_edit(InsertText{3, {"x"}}), std::invalid_argument);
  CHECK_THROWS_AS(c.on_edit(DeleteText{0, 1}), std::invalid_argument);
  CHECK(c.project().module("M").lines == std::vector<std::string>{"local a = 1"});
  CHECK(c.edit_range().empty());
  CHECK(sink.records().empty());
}

TEST_CASE("unenrolled sessions never emit") {
  auto p = project_of({{"A", "local a = 1\n"}, {"B", "local b = 1\n"}});
  MemorySink sink;
  FakeClock clock;
  ClientConfig config;
  config.sampler = {0.0, 1.0, 3};
  TelemetryClient c(p, config, sink, clock.fn());
  c.open("A");
  c.on_edit(ReplaceLine{1, "local a = 2"});
  c.on_module_switch("B");
  CHECK_FALSE(c.enrolled());
  CHECK(sink.records().empty());
}

TEST_CASE("too-complex results accumulate over the session") {
  std::string nested = "local t = " + std::string(16, '{') + std::string(16, '}');
  auto p = project_of({{"M", "--!strict\n" + nested + "\n"}});
  MemorySink sink;
  FakeClock clock;
  ClientConfig config = always();
  config.budget.max_steps = 10;
  TelemetryClient c(p, config, sink, clock.fn());
  // Initial analysis: visible and background each trip once.
  CHECK(c.too_complex_running() == 2);
  c.open("M");
  auto r = c.on_edit(InsertText{3, {"local u = 1"}});
  CHECK(r->overall.too_complex_total == 4);
}

TEST_CASE("consecutive sampled records chain totals") {
  auto p = project_of({{"M", "--!strict\nlocal t = { a = 1 }\n"}, {"Other", "--!strict\nlocal q = zz\n"}});
  MemorySink sink;
  FakeClock clock;
  TelemetryClient c(p, always(), sink, clock.fn());
  c.open("M");
  std::mt19937 rng(5);
  const std::vector<std::string> snippets{"local v = t.a + 1", "local w = t.b", "print(undefined)",
                                          "t.a = nil", "local k = 1", "if t then"};
  for (int i = 0; i < 500; ++i) {
    int n = static_cast<int>(c.project().module("M").lines.size());
    if (n > 3 && rng() % 3 == 0) {
      c.on_edit(DeleteText{static_cast<int>(rng() % (n - 1)) + 2, 1});
    } else {
      c.on_edit(InsertText{n + 1, {snippets[rng() % snippets.size()]}});
    }
    clock.now += 100;
  }
  const auto& rs = sink.records();
  REQUIRE(rs.size() == 500);
  for (std::size_t i = 1; i < rs.size(); ++i) {
    CHECK(rs[i].overall.type_prev.total == rs[i - 1].overall.type_curr.total);
    CHECK(rs[i].overall.type_prev.in_module == rs[i - 1].overall.type_curr.in_module);
    CHECK(rs[i].overall.bg_prev.total == rs[i - 1].overall.bg_curr.total);
    CHECK(find_invariant_violation(rs[i]) == std::nullopt);
    std::int64_t kind_sum = 0;
    for (const auto& [kind, pair] : rs[i].edit_kinds.entries()) kind_sum += pair.curr;
    CHECK(kind_sum == rs[i].overall.type_curr.in_edit_range);
  }
}

TEST_CASE("file sink writes one parseable line per record") {
  auto path = std::filesystem::temp_directory_path() / "teletype_file_sink.jsonl";
  std::filesystem::remove(path);
  {
    FileSink sink(path);
    TelemetryRecord r;
    r.client_ts_ms = 5;
    sink.deliver(r);
    r.client_ts_ms = 6;
    sink.deliver(r);
    sink.flush();
  }
  std::ifstream in(path);
  std::string line;
  std::vector<std::int64_t> ts;
  while (std::getline(in, line)) ts.push_back(parse_record(line).client_ts_ms);
  CHECK(ts == std::vector<std::int64_t>{5, 6});
  std::filesystem::remove(path);
  CHECK_THROWS(HttpSink("ftp://nowhere"));
}
