#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "teletype/analyzer/project.hpp"

namespace fixtures {

inline teletype::analyzer::Project project_of(
    std::initializer_list<std::pair<std::string, std::string>> modules) {
  teletype::analyzer::Project p;
  for (const auto& [id, text] : modules) p.add_module(id, teletype::analyzer::split_lines(text));
  return p;
}

inline const char* kNonstrictSnippet =
    "--!nonstrict\n"
    "local x = { p = 5, q = nil }\n"
    "if condition then x.q = 7 end\n"
    "local y = x.p + x.q --> OK\n"
    "local z = x.r      --> UnknownProperty: Key 'r' not found in table 'x'\n";

inline const char* kStrictSnippet =
    "--!strict\n"
    "local x = { p = 5, q = nil }\n"
    "if condition then x.q = 7 end\n"
    "local y = x.p + x.q --> TypeMismatch: Type 'nil' could not be converted into 'number'\n"
    "local z = x.r      --> UnknownProperty: Key 'r' not found in table 'x'\n";

// The snippets read an environment-provided `condition`.
inline teletype::analyzer::Project snippet_project(const char* text) {
  auto p = project_of({{"Main", text}});
  p.globals.insert("condition");
  return p;
}

}  // namespace fixtures
