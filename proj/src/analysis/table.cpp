#include "teletype/analysis/table.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <regex>

#include "json.hpp"

namespace teletype::analysis {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
}

}  // namespace

std::string to_csv(const std::vector<Table>& tables) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += '\n';
    out += "# " + tables[i].name + '\n';
    csv_line(out, tables[i].columns);
    for (const auto& row : tables[i].rows) csv_line(out, row);
  }
  return out;
}

std::string to_json(const std::vector<Table>& tables) {
  static const std::regex kNumber(R"(-?\d+(\.\d+)?)");
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& t : tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < t.columns.size() && c < row.size(); ++c) {
        const std::string& v = row[c];
        // Session ids keep their leading zeros.
        const bool numeric = t.columns[c] != "session_id" && std::regex_match(v, kNumber);
        if (v == kNotApplicable) {
          obj[t.columns[c]] = nullptr;
        } else if (numeric) {
          obj[t.columns[c]] = nlohmann::ordered_json::parse(v);
        } else {
          obj[t.columns[c]] = v;
        }
      }
      rows.push_back(std::move(obj));
    }
    doc[t.name] = std::move(rows);
  }
  return doc.dump(2) + '\n';
}

std::string cell(std::int64_t value) { return fmt::format("{}", value); }

std::string fixed3(double value) { return fmt::format("{:.3f}", value); }

std::string fixed6(double value) { return fmt::format("{:.6f}", value); }

std::string percent(std::int64_t part, std::int64_t whole) {
  if (whole == 0) return kNotApplicable;
  return fmt::format("{:.2f}", 100.0 * static_cast<double>(part) / static_cast<double>(whole));
}

std::string seconds(std::int64_t ms) {
  const char* sign = ms < 0 ? "-" : "";
  const std::int64_t a = std::llabs(ms);
  return fmt::format("{}{}.{:03d}", sign, a / 1000, a % 1000);
}

}  // namespace teletype::analysis
