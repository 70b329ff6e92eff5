#include "teletype/edit_range.hpp"

#include <algorithm>
#include <stdexcept>

namespace teletype {

EditRange EditRange::interval(int first, int last) {
  if (first < 1 || last < first) {
    throw std::invalid_argument("edit range requires 1 <= first <= last");
  }
  return EditRange(first, last);
}

namespace {

EditRange hull(EditRange range, int first, int last) {
  if (range.empty()) return EditRange::interval(first, last);
  return EditRange::interval(std::min(range.first(), first), std::max(range.last(), last));
}

struct Applier {
  EditRange range;

  EditRange operator()(const ModifyLines& op) const {
    if (op.from < 1 || op.to < op.from) throw std::invalid_argument("bad modify");
    return hull(range, op.from, op.to);
  }

  EditRange operator()(const InsertLines& op) const {
    if (op.at < 1 || op.count < 1) throw std::invalid_argument("bad insert");
    EditRange shifted = range;
    if (!range.empty()) {
      int first = range.first() >= op.at ? range.first() + op.count : range.first();
      int last = range.last() >= op.at ? range.last() + op.count : range.last();
      shifted = EditRange::interval(first, last);
    }
    return hull(shifted, op.at, op.at + op.count - 1);
  }

  EditRange operator()(const DeleteLines& op) const {
    if (op.from < 1 || op.count < 1) throw std::invalid_argument("bad delete");
    if (range.empty()) return range;
    const long del_first = op.from;
    const long del_last = static_cast<long>(op.from) + op.count - 1;
    if (del_last < range.first()) {
      return EditRange::interval(range.first() - op.count, range.last() - op.count);
    }
    if (del_first > range.last()) return range;
    const long overlap =
        std::min<long>(del_last, range.last()) - std::max<long>(del_first, range.first()) + 1;
    const long remaining = range.width() - overlap;
    if (remaining <= 0) return EditRange{};
    const int first = std::min(range.first(), op.from);
    return EditRange::interval(first, first + static_cast<int>(remaining) - 1);
  }
};

}  // namespace

EditRange apply_edit(EditRange range, const EditOp& op) {
  return std::visit(Applier{range}, op);
}

bool overlaps(EditRange range, int start_line, int end_line) {
  if (range.empty()) return false;
  return start_line <= range.last() && end_line >= range.first();
}

bool overlaps(EditRange range, const AnalysisError& error) {
  return overlaps(range, error.start_line, error.end_line);
}

}  // namespace teletype
