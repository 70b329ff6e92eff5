#include "teletype/privacy.hpp"

#include <algorithm>

#include "teletype/error_kind.hpp"

namespace teletype {

PrivacyVerdict audit_privacy(std::string_view bytes, const std::set<std::string>& forbidden) {
  for (const auto& needle : forbidden) {
    if (needle.size() < kMinForbiddenLength) continue;
    if (bytes.find(needle) != std::string_view::npos) return {false, needle};
  }
  return {};
}

const std::set<std::string>& wire_vocabulary() {
  static const std::set<std::string> vocabulary = [] {
    std::set<std::string> v = {
        "session_id", "client_ts_ms", "server_ts_ms", "mode",      "reason",
        "lines_total", "lines_edit",  "overall",      "type_curr", "type_prev",
        "bg_curr",    "bg_prev",      "total",        "module",    "edit",
        "too_complex", "edit_kinds",  "curr",         "prev",      "nocheck",
        "nonstrict",  "strict",       "keystroke",    "module_switch", "corrupt",
    };
    for (auto kind : all_error_kinds()) v.emplace(to_string(kind));
    return v;
  }();
  return vocabulary;
}

bool uses_fixed_vocabulary(std::string_view line) {
  const auto& vocabulary = wire_vocabulary();
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '"') {
      auto close = line.find('"', i + 1);
      if (close == std::string_view::npos) return false;
      std::string_view token = line.substr(i + 1, close - i - 1);
      bool digits = !token.empty() && std::all_of(token.begin(), token.end(), [](char d) {
        return d >= '0' && d <= '9';
      });
      if (!digits && !vocabulary.contains(std::string(token))) return false;
      i = close + 1;
      continue;
    }
    bool structural = (c >= '0' && c <= '9') || c == '{' || c == '}' || c == '[' ||
                      c == ']' || c == ':' || c == ',' || c == '-' || c == ' ' ||
                      c == '\n';
    if (!structural) return false;
    ++i;
  }
  return true;
}

}  // namespace teletype
