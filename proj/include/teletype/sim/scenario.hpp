#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "teletype/analyzer/project.hpp"

namespace teletype::sim {

struct OpenAction {
  std::string module;
};
/// Inserts `text` as a new line `line` of `module`.
struct TypeAction {
  std::string module;
  int line = 1;
  std::string text;
};
struct DeleteAction {
  std::string module;
  int from = 1;
  int count = 1;
};
/// Rewrites the pragma on line 1, inserting one when the module has none.
struct SetModeAction {
  std::string module;
  Mode mode = Mode::NoCheck;
};
struct SwitchAction {
  std::string module;
};
struct WaitAction {
  std::int64_t ms = 0;
};
using Action =
    std::variant<OpenAction, TypeAction, DeleteAction, SetModeAction, SwitchAction, WaitAction>;

std::string_view action_name(const Action& action);

// 2024-03-01T00:00:00Z
inline constexpr std::int64_t kDefaultStartMs = 1'709'251'200'000;

struct Scenario {
  analyzer::Project project;
  std::int64_t start_ms = kDefaultStartMs;
  std::vector<Action> actions;

  bool operator==(const Scenario& other) const;
};

/// `index` is the 1-based source line for parse errors and the 0-based action
/// position for replay errors.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t index, const std::string& message)
      : std::runtime_error(message), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Line-oriented scenario text:
///
///   start <ms>                 simulated session start (optional)
///   data_model <name>...       asset names under `game`
///   globals <name>...          environment-provided names
///   file <module>              module text follows verbatim
///   ...
///   endfile
///   open <module>
///   type <module> <line> <text>
///   delete <module> <from> <count>
///   set_mode <module> nocheck|nonstrict|strict
///   switch <module>
///   wait <ms>
///
/// Blank lines and lines starting with `#` outside file blocks are ignored.
/// Throws ScenarioError naming the offending line.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Inverse of parse_scenario.
std::string format_scenario(const Scenario& scenario);

}  // namespace teletype::sim
