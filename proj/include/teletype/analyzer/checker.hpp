#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "teletype/analysis_error.hpp"
#include "teletype/analyzer/module_graph.hpp"
#include "teletype/analyzer/parser.hpp"
#include "teletype/analyzer/project.hpp"
#include "teletype/record.hpp"

namespace teletype::analyzer {

struct Type;
using TypeHandle = std::shared_ptr<const Type>;

/// Work limit for one module check. One unit is charged per statement and
/// expression node visited and one per type equation (assignment, call,
/// operator, cast), so the work of a module depends on its syntax only.
struct AnalysisBudget {
  std::size_t max_steps = 100'000;
};

/// How the data model root `game` is typed: strict analysis uses the top type
/// (every use needs a cast), nonstrict and background analysis use dynamic.
enum class DataModelTyping { Top, Dynamic };

/// Export type of an imported module; dynamic when the importee was not
/// analyzed.
using ImportResolver = std::function<TypeHandle(const std::string& module_id)>;

struct ModuleOutcome {
  std::vector<AnalysisError> errors;
  TypeHandle exported;
  std::size_t work = 0;
};

/// Kinds a mode reports: nocheck only SyntaxError; nonstrict adds the
/// high-confidence kinds and CodeTooComplex; strict reports everything.
bool mode_reports(Mode mode, ErrorKind kind);

/// Checks one module whose parse result is already known. A failed parse
/// yields the syntax errors alone; nocheck yields no type errors.
ModuleOutcome check_parsed_module(const Project& project, const ModuleGraph& graph,
                                  const std::string& module_id, const ParseResult& parsed,
                                  Mode mode, DataModelTyping data_model,
                                  const ImportResolver& resolve, AnalysisBudget budget);

/// Checks `module_id` under `mode`, with imports resolved from the visible
/// analysis of the rest of the project.
std::vector<AnalysisError> check_module(const Project& project, const std::string& module_id,
                                        Mode mode, AnalysisBudget budget = {});

/// Every module checked in its declared mode.
AnalysisResult visible_check(const Project& project, AnalysisBudget budget = {});

/// Every module checked with strict rules regardless of its pragma, with the
/// data model typed dynamic and every import analyzed.
AnalysisResult background_check(const Project& project, AnalysisBudget budget = {});

}  // namespace teletype::analyzer
