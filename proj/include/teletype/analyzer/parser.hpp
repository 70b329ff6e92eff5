#pragma once

#include <span>
#include <string>
#include <vector>

#include "teletype/analysis_error.hpp"
#include "teletype/analyzer/ast.hpp"

namespace teletype::analyzer {

struct ParseResult {
  Block ast;
  // At most one SyntaxError: parsing stops at the first unrecoverable point.
  std::vector<AnalysisError> errors;

  bool ok() const { return errors.empty(); }
};

/// Parses the supported Lua subset. Never throws on bad input; syntax problems
/// come back as SyntaxError values carrying their line span. `module_id` is
/// copied into every reported error.
ParseResult parse(std::span<const std::string> lines, const std::string& module_id = {});

}  // namespace teletype::analyzer
