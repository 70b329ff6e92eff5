#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "teletype/record.hpp"

namespace teletype::analyzer {

/// Mode declared by a `--!<mode>` comment on the first line; nocheck otherwise.
Mode pragma_mode(const std::vector<std::string>& lines);

struct ModuleSource {
  std::string id;
  std::vector<std::string> lines;

  Mode mode() const { return pragma_mode(lines); }
};

struct Project {
  std::map<std::string, ModuleSource> modules;
  // Asset names reachable from the data model root `game`.
  std::set<std::string> data_model;
  // Names bound by the embedding environment, typed as the dynamic type.
  std::set<std::string> globals;

  void add_module(std::string id, std::vector<std::string> lines);
  const ModuleSource& module(const std::string& id) const;
  bool contains(const std::string& id) const { return modules.contains(id); }
  std::int64_t line_count() const;
};

std::vector<std::string> split_lines(std::string_view text);

/// Loads `<dir>/<module_id>.luau` files, `data_model.txt` and the optional
/// `globals.txt` (one name per line). Throws std::runtime_error on I/O errors.
Project load_project(const std::filesystem::path& dir);

}  // namespace teletype::analyzer
