#pragma once

// Reference model for edit tracking: every line carries a stable id, and the
// set of covered ids is maintained directly instead of as an interval.

#include <algorithm>
#include <set>
#include <vector>

#include "teletype/edit_range.hpp"

namespace oracle {

class LineBuffer {
 public:
  explicit LineBuffer(int lines) {
    for (int i = 0; i < lines; ++i) ids_.push_back(next_id_++);
  }

  int size() const { return static_cast<int>(ids_.size()); }

  // Applies the edit and returns the positions touched by it. Covered ids are
  // then closed under the hull so that untouched lines between two edits stay
  // covered, which is what a single interval implies.
  void apply(const teletype::EditOp& op) {
    std::vector<int> touched;
    if (const auto* ins = std::get_if<teletype::InsertLines>(&op)) {
      int at = std::min(ins->at, size() + 1);
      for (int i = 0; i < ins->count; ++i) {
        int id = next_id_++;
        ids_.insert(ids_.begin() + (at - 1 + i), id);
        covered_.insert(id);
      }
    } else if (const auto* del = std::get_if<teletype::DeleteLines>(&op)) {
      int from = del->from - 1;
      int end = std::min(size(), from + del->count);
      for (int i = from; i < end; ++i) covered_.erase(ids_[i]);
      if (from < end) ids_.erase(ids_.begin() + from, ids_.begin() + end);
    } else {
      const auto& mod = std::get<teletype::ModifyLines>(op);
      for (int line = mod.from; line <= mod.to; ++line) {
        while (size() < line) ids_.push_back(next_id_++);
        covered_.insert(ids_[line - 1]);
      }
    }
    close_hull();
  }

  void reset() { covered_.clear(); }

  // Positions (1-based) of covered lines, ascending.
  std::vector<int> covered_positions() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
      if (covered_.contains(ids_[i])) out.push_back(i + 1);
    }
    return out;
  }

 private:
  void close_hull() {
    auto pos = covered_positions();
    if (pos.empty()) return;
    for (int p = pos.front(); p <= pos.back(); ++p) covered_.insert(ids_[p - 1]);
  }

  std::vector<int> ids_;
  std::set<int> covered_;
  int next_id_ = 1;
};

}  // namespace oracle
