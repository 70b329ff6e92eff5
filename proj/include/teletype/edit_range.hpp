#pragma once

#include <cstdint>
#include <variant>

#include "teletype/analysis_error.hpp"

namespace teletype {

struct InsertLines {
  int at = 1;     // first inserted line
  int count = 1;  // lines at or below `at` move down by `count`
};

struct DeleteLines {
  int from = 1;
  int count = 1;
};

struct ModifyLines {
  int from = 1;
  int to = 1;
};

using EditOp = std::variant<InsertLines, DeleteLines, ModifyLines>;

/// A single line interval accumulating every edit since the last reset.
/// Either empty or [first, last] with 1 <= first <= last.
class EditRange {
 public:
  EditRange() = default;
  static EditRange interval(int first, int last);

  bool empty() const { return first_ == 0; }
  int first() const { return first_; }
  int last() const { return last_; }
  /// Number of covered lines; 0 when empty.
  std::int64_t width() const { return empty() ? 0 : last_ - first_ + 1; }

  bool operator==(const EditRange&) const = default;

 private:
  EditRange(int first, int last) : first_(first), last_(last) {}

  int first_ = 0;
  int last_ = 0;
};

/// Smallest single interval covering the previously covered lines that still
/// exist (at their new positions) and every line the edit touched. Deletions
/// touch nothing; deleting every covered line yields an empty range.
///
/// Throws std::invalid_argument for lines < 1, counts < 1 or to < from.
EditRange apply_edit(EditRange range, const EditOp& op);

bool overlaps(EditRange range, int start_line, int end_line);
bool overlaps(EditRange range, const AnalysisError& error);

inline EditRange reset(EditRange) { return EditRange{}; }

}  // namespace teletype
