#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/projects.hpp"
#include "teletype/analyzer/incremental.hpp"

using namespace teletype;
using namespace teletype::analyzer;
using fixtures::project_of;

namespace {

// (kind, line) pairs in line order.
std::vector<std::pair<ErrorKind, int>> kinds_and_lines(const std::vector<AnalysisError>& errors) {
  std::vector<std::pair<ErrorKind, int>> out;
  for (const auto& e : errors) out.emplace_back(e.kind, e.start_line);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second, a.first) < std::tie(b.second, b.first);
  });
  return out;
}

std::vector<AnalysisError> strict_errors(const std::string& body, AnalysisBudget budget = {}) {
  auto p = project_of({{"M", "--!strict\n" + body}});
  return check_module(p, "M", Mode::Strict, budget);
}

bool has_kind(const std::vector<AnalysisError>& errors, ErrorKind kind) {
  return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.kind == kind; });
}

}  // namespace

TEST_CASE("parser basics") {
  std::vector<std::string> bad{"if end"};
  auto r = parse(bad);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].kind == ErrorKind::SyntaxError);
  CHECK(r.errors[0].start_line == 1);

  CHECK(parse(std::vector<std::string>{}).ok());
  CHECK(parse(std::vector<std::string>{""}).ok());
  auto lines = split_lines(fixtures::kNonstrictSnippet);
  CHECK(lines.size() == 5);
  CHECK(parse(lines).ok());
}

TEST_CASE("syntax errors carry their line") {
  auto r = parse(split_lines("local a = 1\nlocal b = {\nlocal c = 3\n"));
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].start_line == 3);
  auto unterminated = parse(split_lines("if a then\n  print(a)\n"));
  REQUIRE(unterminated.errors.size() == 1);
  auto deep = parse(std::vector<std::string>{std::string(500, '(') + "1" + std::string(500, ')')});
  CHECK(deep.errors.size() == 1);
}

TEST_CASE("pragma selects the mode") {
  CHECK(pragma_mode({"--!strict"}) == Mode::Strict);
  CHECK(pragma_mode({"--!nonstrict", "x"}) == Mode::NonStrict);
  CHECK(pragma_mode({"--!nocheck"}) == Mode::NoCheck);
  CHECK(pragma_mode({"local a = 1", "--!strict"}) == Mode::NoCheck);
  CHECK(pragma_mode({}) == Mode::NoCheck);
}

TEST_CASE("worked examples") {
  auto ns = fixtures::snippet_project(fixtures::kNonstrictSnippet);
  auto nonstrict = check_module(ns, "Main", Mode::NonStrict);
  REQUIRE(nonstrict.size() == 1);
  CHECK(nonstrict[0].kind == ErrorKind::UnknownProperty);
  CHECK(nonstrict[0].start_line == 5);
  CHECK(nonstrict[0].message == "Key 'r' not found in table 'x'");

  auto st = fixtures::snippet_project(fixtures::kStrictSnippet);
  auto strict = check_module(st, "Main", Mode::Strict);
  CHECK(kinds_and_lines(strict) ==
        std::vector<std::pair<ErrorKind, int>>{{ErrorKind::TypeMismatch, 4}, {ErrorKind::UnknownProperty, 5}});
  auto mismatch = std::find_if(strict.begin(), strict.end(),
                               [](const auto& e) { return e.kind == ErrorKind::TypeMismatch; });
  CHECK(mismatch->message == "Type 'nil' could not be converted into 'number'");

  CHECK(check_module(ns, "Main", Mode::NoCheck).empty());
  // Visible analysis honors each file's own pragma.
  CHECK(visible_check(ns).at("Main").size() == 1);
  CHECK(visible_check(st).at("Main").size() == 2);
}

TEST_CASE("nonstrict kinds") {
  auto p = project_of({{"M",
                        "--!nonstrict\n"
                        "local t = { a = 1 }\n"
                        "local n = 5\n"
                        "local function f(a, b) return a end\n"
                        "print(missing)\n"
                        "f(1)\n"
                        "n()\n"
                        "local v = n.field\n"
                        "local r = require(\"Nowhere\")\n"
                        "local s = t.b\n"}});
  auto errors = check_module(p, "M", Mode::NonStrict);
  CHECK(kinds_and_lines(errors) == std::vector<std::pair<ErrorKind, int>>{
                                       {ErrorKind::UnknownSymbol, 5},
                                       {ErrorKind::CountMismatch, 6},
                                       {ErrorKind::CannotCallNonFunction, 7},
                                       {ErrorKind::NotATable, 8},
                                       {ErrorKind::UnknownRequire, 9},
                                       {ErrorKind::UnknownProperty, 10}});
}

TEST_CASE("strict-only kinds") {
  CHECK(has_kind(strict_errors("local t = { a = 1 }\nlocal u = t + 1\n"),
                 ErrorKind::CannotInferBinaryOperation));
  CHECK(has_kind(strict_errors("local t = nil\nt = { a = 1 }\nlocal v = t.a\n"),
                 ErrorKind::OptionalValueAccess));
  CHECK(has_kind(strict_errors("local t = { a = 1 }\nt = { b = 2 }\n"), ErrorKind::MissingProperties));
  CHECK(has_kind(strict_errors("local n = 1\nn = \"s\"\n"), ErrorKind::TypeMismatch));
  CHECK(has_kind(strict_errors("local s = \"a\" :: number\n"), ErrorKind::TypesAreUnrelated));
  CHECK(strict_errors("local s = 1 :: number\nlocal d = game :: number\n").empty());
  CHECK(has_kind(strict_errors("local s = require(\"M\" + 1)\n"), ErrorKind::IllegalRequire));

  auto missing_return = strict_errors(
      "local function f(a)\n"
      "  if a then\n"
      "    return 1\n"
      "  end\n"
      "end\n");
  REQUIRE(missing_return.size() == 1);
  CHECK(missing_return[0].kind == ErrorKind::FunctionExitsWithoutReturning);
  CHECK(missing_return[0].start_line == 2);
  CHECK(missing_return[0].end_line == 6);
  CHECK(strict_errors("local function f(a)\n  if a then return 1 else return 2 end\nend\n").empty());
  CHECK(strict_errors("local function f(a)\n  print(a)\nend\n").empty());
}

TEST_CASE("imported tables are sealed") {
  auto p = project_of({{"Lib", "--!strict\nlocal m = { size = 1 }\nreturn m\n"},
                       {"App",
                        "--!strict\n"
                        "local lib = require(\"Lib\")\n"
                        "lib.extra = 2\n"
                        "lib.size = 3\n"
                        "local s = lib.size + 1\n"}});
  CHECK(kinds_and_lines(check_module(p, "App", Mode::Strict)) ==
        std::vector<std::pair<ErrorKind, int>>{{ErrorKind::CannotExtendTable, 3}});
  // Local tables grow freely.
  CHECK(strict_errors("local t = {}\nt.a = 1\nlocal b = t.a + 1\n").empty());
}

TEST_CASE("nocheck imports are opaque to visible analysis but not to background") {
  auto p = project_of({{"Lib", "local m = { size = 1 }\nreturn m\n"},
                       {"App", "--!strict\nlocal lib = require(\"Lib\")\nlocal v = lib.nope\n"}});
  CHECK(visible_check(p).at("App").empty());
  auto bg = background_check(p).at("App");
  REQUIRE(bg.size() == 1);
  CHECK(bg[0].kind == ErrorKind::UnknownProperty);
}

TEST_CASE("data model access in strict versus background") {
  auto p = project_of({{"M", "--!strict\nlocal g = game.Workspace.Gravity\n"}});
  p.data_model = {"Workspace"};
  auto strict = check_module(p, "M", Mode::Strict);
  REQUIRE(strict.size() == 1);
  CHECK(strict[0].kind == ErrorKind::TypeMismatch);
  CHECK(strict[0].data_model_rooted);
  CHECK(background_check(p).at("M").empty());
  CHECK(check_module(p, "M", Mode::NonStrict).empty());
  // A cast makes the access legal.
  auto cast = project_of({{"M", "--!strict\nlocal w = (game :: any).Workspace\n"}});
  CHECK(check_module(cast, "M", Mode::Strict).empty());
}

TEST_CASE("background forces strict rules on every module") {
  auto p = project_of({{"M", "local v = unbound\n"}});
  CHECK(visible_check(p).at("M").empty());
  auto bg = background_check(p).at("M");
  REQUIRE(bg.size() == 1);
  CHECK(bg[0].kind == ErrorKind::UnknownSymbol);
}

TEST_CASE("cycles: one error per removed edge, strict only") {
  auto p = project_of({{"A", "--!strict\nlocal b = require(\"B\")\nreturn {}\n"},
                       {"B", "--!strict\nlocal c = require(\"C\")\nlocal c2 = require(\"C\")\nreturn {}\n"},
                       {"C", "--!nonstrict\nlocal a = require(\"A\")\nreturn {}\n"}});
  ModuleGraph graph({{"A", {"B"}}, {"B", {"C"}}, {"C", {"A"}}});
  REQUIRE(graph.removed_edges().size() == 1);
  CHECK(*graph.removed_edges().begin() == ImportEdge{"C", "A"});
  auto strict_c = check_module(p, "C", Mode::Strict);
  REQUIRE(strict_c.size() == 1);
  CHECK(strict_c[0].kind == ErrorKind::ModuleHasCyclicDependency);
  CHECK(visible_check(p).at("C").empty());
  CHECK(background_check(p).at("C").size() == 1);

  ModuleGraph two({{"A", {"B"}}, {"B", {"A", "C"}}, {"C", {"B"}}});
  CHECK(two.removed_edges() == std::set<ImportEdge>{{"B", "A"}, {"C", "B"}});
  CHECK(two.topo_order() == std::vector<std::string>{"C", "B", "A"});
}

TEST_CASE("budget trips on deep nesting") {
  std::string nested = "local t = " + std::string(16, '{') + std::string(16, '}') + "\n";
  auto errors = strict_errors(nested, AnalysisBudget{10});
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].kind == ErrorKind::CodeTooComplex);
  CHECK(strict_errors(nested).empty());
  auto p = project_of({{"M", nested}});
  // Budgets bind in every mode that type checks, and in background analysis.
  CHECK(check_module(p, "M", Mode::NonStrict, AnalysisBudget{10}).size() == 1);
  CHECK(check_module(p, "M", Mode::NoCheck, AnalysisBudget{10}).empty());
  CHECK(too_complex_count(background_check(p, AnalysisBudget{10})) == 1);
}

TEST_CASE("dirty sets") {
  ModuleGraph leaf({{"A", {}}, {"B", {}}});
  CHECK(leaf.dirty_set("A") == std::set<std::string>{"A"});
  ModuleGraph chain({{"A", {"B"}}, {"B", {"C"}}, {"C", {}}});
  CHECK(chain.dirty_set("C") == std::set<std::string>{"A", "B", "C"});
  CHECK_THROWS_AS(chain.dirty_set("Z"), std::out_of_range);
}

TEST_CASE("dirty set equals reversed reachability on random DAGs") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    int n = static_cast<int>(rng() % 12) + 1;
    std::map<std::string, std::set<std::string>> imports;
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("M" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
      imports[ids[i]];
      for (int j = 0; j < i; ++j) {
        if (rng() % 3 == 0) imports[ids[i]].insert(ids[j]);
      }
    }
    ModuleGraph graph(imports);
    REQUIRE(graph.removed_edges().empty());
    // Brute force: Floyd-Warshall style closure on the adjacency matrix.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
      reach[i][i] = true;
      for (int j = 0; j < n; ++j) reach[i][j] = reach[i][j] || imports[ids[i]].contains(ids[j]);
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    for (int target = 0; target < n; ++target) {
      std::set<std::string> expected;
      for (int i = 0; i < n; ++i) {
        if (reach[i][target]) expected.insert(ids[i]);
      }
      REQUIRE(graph.dirty_set(ids[target]) == expected);
    }
  }
}

TEST_CASE("incremental analysis rechecks only the dirty set") {
  auto p = project_of({{"Base", "--!strict\nlocal m = { v = 1 }\nreturn m\n"},
                       {"Mid", "--!strict\nlocal b = require(\"Base\")\nlocal x = b.v + 1\nreturn b\n"},
                       {"Top", "--!nonstrict\nlocal m = require(\"Mid\")\nlocal y = m.v\n"},
                       {"Solo", "--!strict\nlocal s = 1\n"}});
  ProjectAnalyzer analyzer;
  auto first = analyzer.analyze(p);
  CHECK(analyzer.last_checked().size() == 4);
  CHECK(first.visible == visible_check(p));

  p.modules.at("Solo").lines.push_back("local t = s + 1");
  analyzer.analyze(p);
  CHECK(analyzer.last_checked() == std::set<std::string>{"Solo"});

  p.modules.at("Base").lines[1] = "local m = { w = 1 }";
  auto after = analyzer.analyze(p);
  CHECK(analyzer.last_checked() == std::set<std::string>{"Base", "Mid", "Top"});
  CHECK(after.visible == visible_check(p));
  CHECK(after.background == background_check(p));
  CHECK(after.visible.at("Top").size() == 1);

  analyzer.analyze(p);
  CHECK(analyzer.last_checked().empty());
}
