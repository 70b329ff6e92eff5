#include <random>

#include "doctest.h"
#include "support/line_buffer.hpp"
#include "teletype/edit_range.hpp"

using namespace teletype;

TEST_CASE("first edit and widening") {
  EditRange r = apply_edit(EditRange{}, ModifyLines{10, 10});
  CHECK(r == EditRange::interval(10, 10));
  r = apply_edit(EditRange::interval(5, 5), ModifyLines{12, 12});
  CHECK(r == EditRange::interval(5, 12));
  CHECK(r.width() == 8);
}

TEST_CASE("insert above the range joins and shifts") {
  CHECK(apply_edit(EditRange::interval(5, 12), InsertLines{3, 2}) == EditRange::interval(3, 14));
  CHECK(apply_edit(EditRange::interval(5, 12), InsertLines{20, 1}) == EditRange::interval(5, 20));
  CHECK(apply_edit(EditRange{}, InsertLines{4, 3}) == EditRange::interval(4, 6));
}

TEST_CASE("deletions shrink, shift and can empty the range") {
  CHECK(apply_edit(EditRange::interval(5, 12), DeleteLines{1, 2}) == EditRange::interval(3, 10));
  CHECK(apply_edit(EditRange::interval(5, 12), DeleteLines{10, 5}) == EditRange::interval(5, 9));
  CHECK(apply_edit(EditRange::interval(5, 12), DeleteLines{4, 20}).empty());
  CHECK(apply_edit(EditRange::interval(5, 12), DeleteLines{13, 2}) == EditRange::interval(5, 12));
  CHECK(apply_edit(EditRange{}, DeleteLines{1, 3}).empty());
}

TEST_CASE("bad arguments are rejected") {
  CHECK_THROWS(apply_edit(EditRange{}, ModifyLines{0, 1}));
  CHECK_THROWS(apply_edit(EditRange{}, ModifyLines{3, 2}));
  CHECK_THROWS(apply_edit(EditRange{}, InsertLines{1, 0}));
  CHECK_THROWS(apply_edit(EditRange{}, DeleteLines{1, -1}));
}

TEST_CASE("overlap boundaries") {
  auto r = EditRange::interval(5, 12);
  CHECK(overlaps(r, 12, 12));
  CHECK(overlaps(r, 1, 5));
  CHECK_FALSE(overlaps(r, 13, 20));
  CHECK_FALSE(overlaps(EditRange{}, 1, 100));
}

TEST_CASE("overlap matches per-line membership") {
  std::mt19937 rng(3);
  for (int i = 0; i < 5000; ++i) {
    int a = rng() % 30 + 1, b = a + rng() % 10;
    int s = rng() % 40 + 1, e = s + rng() % 6;
    bool brute = false;
    for (int line = s; line <= e; ++line) brute |= (line >= a && line <= b);
    CHECK(overlaps(EditRange::interval(a, b), s, e) == brute);
  }
}

TEST_CASE("reset empties") {
  CHECK(reset(EditRange::interval(1, 9)).empty());
  CHECK(reset(EditRange{}).empty());
  CHECK(EditRange{}.width() == 0);
}

TEST_CASE("coverage and minimality against the line buffer") {
  std::mt19937 rng(12345);
  for (int seq = 0; seq < 1000; ++seq) {
    oracle::LineBuffer buffer(static_cast<int>(rng() % 30 + 1));
    EditRange range;
    int steps = static_cast<int>(rng() % 25 + 1);
    for (int step = 0; step < steps; ++step) {
      EditOp op;
      int n = buffer.size();
      switch (rng() % 4) {
        case 0:
          op = InsertLines{static_cast<int>(rng() % (n + 1)) + 1, static_cast<int>(rng() % 4) + 1};
          break;
        case 1:
          if (n == 0) continue;
          op = DeleteLines{static_cast<int>(rng() % n) + 1, static_cast<int>(rng() % 5) + 1};
          break;
        default: {
          if (n == 0) continue;
          int from = static_cast<int>(rng() % n) + 1;
          op = ModifyLines{from, std::min(n, from + static_cast<int>(rng() % 3))};
        }
      }
      if (rng() % 20 == 0) {
        buffer.reset();
        range = reset(range);
      }
      buffer.apply(op);
      range = apply_edit(range, op);
      auto covered = buffer.covered_positions();
      if (covered.empty()) {
        REQUIRE(range.empty());
      } else {
        REQUIRE_FALSE(range.empty());
        // Coverage plus minimality: both endpoints are covered lines.
        REQUIRE(range.first() == covered.front());
        REQUIRE(range.last() == covered.back());
        REQUIRE(range.width() == static_cast<std::int64_t>(covered.size()));
      }
    }
  }
}
