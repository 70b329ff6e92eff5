#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace teletype::analysis {

/// A named result table with pre-rendered cells. Rendering is part of the
/// metric definition so that two implementations can be compared byte for
/// byte.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

/// Each table as a `# name` line, a header line and one line per row; tables
/// are separated by an empty line.
std::string to_csv(const std::vector<Table>& tables);

/// {"<name>": [{"<column>": value, ...}, ...], ...}; numeric cells become
/// JSON numbers, "n/a" becomes null.
std::string to_json(const std::vector<Table>& tables);

// Cell formatting shared by every metric.
std::string cell(std::int64_t value);
std::string fixed3(double value);
std::string fixed6(double value);
/// part / whole as a percentage with two decimals, or "n/a" when whole is 0.
std::string percent(std::int64_t part, std::int64_t whole);
/// Milliseconds rendered as seconds with exactly three decimals.
std::string seconds(std::int64_t ms);
inline const char* kNotApplicable = "n/a";

}  // namespace teletype::analysis
