#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace teletype::analysis {

/// Summary of an integer sample. Median and p99 use the nearest-rank rule on
/// the sorted sample (rank ceil(q * n), 1-based); stddev is the population
/// standard deviation.
struct DistStats {
  std::size_t n = 0;
  double mean = 0;
  double stddev = 0;
  std::int64_t median = 0;
  std::int64_t p99 = 0;
  std::int64_t min = 0;
  std::int64_t max = 0;
};

/// nullopt for an empty sample.
std::optional<DistStats> dist_stats(std::span<const std::int64_t> values);

/// 1-based nearest rank for quantile num/den of n values.
std::size_t nearest_rank(std::size_t n, std::size_t num, std::size_t den);

/// Cells n, mean, stddev, median, p99. With `as_seconds` the sample is in
/// milliseconds and is rendered in seconds. Empty samples render as n/a.
std::vector<std::string> stats_cells(const std::optional<DistStats>& stats, bool as_seconds = false);

}  // namespace teletype::analysis
