#include "teletype/analyzer/project.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace teletype::analyzer {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::set<std::string> read_name_list(const std::filesystem::path& path) {
  std::set<std::string> names;
  if (!std::filesystem::exists(path)) return names;
  for (const auto& line : split_lines(read_file(path))) {
    auto name = trim(line);
    if (!name.empty() && name.front() != '#') names.emplace(name);
  }
  return names;
}

}  // namespace

Mode pragma_mode(const std::vector<std::string>& lines) {
  if (lines.empty()) return Mode::NoCheck;
  std::string_view first = trim(lines.front());
  if (!first.starts_with("--!")) return Mode::NoCheck;
  return mode_from_string(trim(first.substr(3))).value_or(Mode::NoCheck);
}

void Project::add_module(std::string id, std::vector<std::string> lines) {
  ModuleSource source{id, std::move(lines)};
  modules.insert_or_assign(std::move(id), std::move(source));
}

const ModuleSource& Project::module(const std::string& id) const {
  auto it = modules.find(id);
  if (it == modules.end()) throw std::out_of_range(fmt::format("unknown module '{}'", id));
  return it->second;
}

std::int64_t Project::line_count() const {
  std::int64_t total = 0;
  for (const auto& [id, source] : modules) total += static_cast<std::int64_t>(source.lines.size());
  return total;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  if (text.empty()) return lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

Project load_project(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error(fmt::format("{} is not a directory", dir.string()));
  }
  Project project;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".luau") {
      project.add_module(entry.path().stem().string(), split_lines(read_file(entry.path())));
    }
  }
  project.data_model = read_name_list(dir / "data_model.txt");
  project.globals = read_name_list(dir / "globals.txt");
  return project;
}

}  // namespace teletype::analyzer
