#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "teletype/error_kind.hpp"

namespace teletype {

/// One error reported by a type-analysis run. Client-internal: the message
/// and module id are source-derived and never leave the client.
struct AnalysisError {
  ErrorKind kind = ErrorKind::GenericError;
  std::string module_id;
  int start_line = 1;  // 1-based, inclusive
  int end_line = 1;
  std::string message;
  // Blamed expression is a use of the data model root under top typing.
  bool data_model_rooted = false;

  auto key() const { return std::tie(module_id, kind, start_line, end_line); }

  bool operator==(const AnalysisError&) const = default;
};

/// Errors of one analysis invocation, keyed by module id. Every module of the
/// analyzed project has an entry, possibly empty.
using AnalysisResult = std::map<std::string, std::vector<AnalysisError>>;

}  // namespace teletype
