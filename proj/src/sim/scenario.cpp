#include "teletype/sim/scenario.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace teletype::sim {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T number(std::string_view word, std::size_t line_no, T min) {
  T value{};
  auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || end != word.data() + word.size() || value < min) {
    throw ScenarioError(line_no, fmt::format("line {}: expected an integer >= {}, got '{}'", line_no,
                                             min, word));
  }
  return value;
}

// Text after the first `skip` words, with one separating space removed.
std::string rest_after(std::string_view line, int skip) {
  std::size_t i = 0;
  for (int w = 0; w < skip; ++w) {
    while (i < line.size() && line[i] == ' ') ++i;
    while (i < line.size() && line[i] != ' ') ++i;
  }
  if (i < line.size()) ++i;
  return std::string(line.substr(std::min(i, line.size())));
}

}  // namespace

std::string_view action_name(const Action& action) {
  return std::visit(Overloaded{[](const OpenAction&) { return "open"; },
                               [](const TypeAction&) { return "type"; },
                               [](const DeleteAction&) { return "delete"; },
                               [](const SetModeAction&) { return "set_mode"; },
                               [](const SwitchAction&) { return "switch"; },
                               [](const WaitAction&) { return "wait"; }},
                    action);
}

bool Scenario::operator==(const Scenario& other) const {
  return format_scenario(*this) == format_scenario(other);
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  const auto lines = analyzer::split_lines(text);
  std::vector<std::pair<std::size_t, std::string>> references;  // line, module
  std::size_t i = 0;
  while (i < lines.size()) {
    const std::size_t line_no = i + 1;
    const std::string& line = lines[i++];
    const auto w = words(line);
    if (w.empty() || w[0].starts_with("#")) continue;
    const std::string_view op = w[0];
    auto need = [&](std::size_t n) {
      if (w.size() < n) {
        throw ScenarioError(line_no, fmt::format("line {}: '{}' needs {} argument{}", line_no, op,
                                                 n - 1, n == 2 ? "" : "s"));
      }
      if (w.size() > n && op != "type" && op != "data_model" && op != "globals") {
        throw ScenarioError(line_no, fmt::format("line {}: trailing text after '{}'", line_no, op));
      }
    };
    if (op == "start") {
      need(2);
      s.start_ms = number<std::int64_t>(w[1], line_no, 0);
    } else if (op == "data_model") {
      for (std::size_t k = 1; k < w.size(); ++k) s.project.data_model.emplace(w[k]);
    } else if (op == "globals") {
      for (std::size_t k = 1; k < w.size(); ++k) s.project.globals.emplace(w[k]);
    } else if (op == "file") {
      need(2);
      std::string id(w[1]);
      if (s.project.contains(id)) {
        throw ScenarioError(line_no, fmt::format("line {}: module '{}' defined twice", line_no, id));
      }
      std::vector<std::string> body;
      while (i < lines.size() && lines[i] != "endfile") body.push_back(lines[i++]);
      if (i == lines.size()) {
        throw ScenarioError(line_no, fmt::format("line {}: 'file {}' has no 'endfile'", line_no, id));
      }
      ++i;
      s.project.add_module(std::move(id), std::move(body));
    } else if (op == "open" || op == "switch") {
      need(2);
      references.emplace_back(line_no, std::string(w[1]));
      if (op == "open") {
        s.actions.push_back(OpenAction{std::string(w[1])});
      } else {
        s.actions.push_back(SwitchAction{std::string(w[1])});
      }
    } else if (op == "type") {
      need(3);
      references.emplace_back(line_no, std::string(w[1]));
      s.actions.push_back(TypeAction{std::string(w[1]), number<int>(w[2], line_no, 1), rest_after(line, 3)});
    } else if (op == "delete") {
      need(4);
      references.emplace_back(line_no, std::string(w[1]));
      s.actions.push_back(
          DeleteAction{std::string(w[1]), number<int>(w[2], line_no, 1), number<int>(w[3], line_no, 1)});
    } else if (op == "set_mode") {
      need(3);
      references.emplace_back(line_no, std::string(w[1]));
      auto mode = mode_from_string(w[2]);
      if (!mode) throw ScenarioError(line_no, fmt::format("line {}: unknown mode '{}'", line_no, w[2]));
      s.actions.push_back(SetModeAction{std::string(w[1]), *mode});
    } else if (op == "wait") {
      need(2);
      s.actions.push_back(WaitAction{number<std::int64_t>(w[1], line_no, 0)});
    } else {
      throw ScenarioError(line_no, fmt::format("line {}: unknown action '{}'", line_no, op));
    }
  }
  for (const auto& [line_no, module] : references) {
    if (!s.project.contains(module)) {
      throw ScenarioError(line_no, fmt::format("line {}: unknown module '{}'", line_no, module));
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string format_scenario(const Scenario& s) {
  std::string out = fmt::format("start {}\n", s.start_ms);
  if (!s.project.data_model.empty()) {
    out += fmt::format("data_model {}\n", fmt::join(s.project.data_model, " "));
  }
  if (!s.project.globals.empty()) out += fmt::format("globals {}\n", fmt::join(s.project.globals, " "));
  for (const auto& [id, m] : s.project.modules) {
    out += fmt::format("file {}\n", id);
    for (const auto& l : m.lines) out += l + "\n";
    out += "endfile\n";
  }
  for (const auto& a : s.actions) {
    out += std::visit(
        Overloaded{
            [](const OpenAction& x) { return fmt::format("open {}\n", x.module); },
            [](const TypeAction& x) { return fmt::format("type {} {} {}\n", x.module, x.line, x.text); },
            [](const DeleteAction& x) { return fmt::format("delete {} {} {}\n", x.module, x.from, x.count); },
            [](const SetModeAction& x) { return fmt::format("set_mode {} {}\n", x.module, to_string(x.mode)); },
            [](const SwitchAction& x) { return fmt::format("switch {}\n", x.module); },
            [](const WaitAction& x) { return fmt::format("wait {}\n", x.ms); }},
        a);
  }
  return out;
}

}  // namespace teletype::sim
