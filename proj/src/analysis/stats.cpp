#include "teletype/analysis/stats.hpp"

#include <algorithm>
#include <cmath>

#include "teletype/analysis/table.hpp"

namespace teletype::analysis {

namespace {
__extension__ using int128 = __int128;
}  // namespace

std::size_t nearest_rank(std::size_t n, std::size_t num, std::size_t den) {
  return std::max<std::size_t>(1, (num * n + den - 1) / den);
}

std::optional<DistStats> dist_stats(std::span<const std::int64_t> values) {
  if (values.empty()) return std::nullopt;
  std::vector<std::int64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  // Exact integer sums keep mean and variance independent of input order.
  int128 sum = 0;
  int128 sum_sq = 0;
  for (std::int64_t v : sorted) {
    sum += v;
    sum_sq += static_cast<int128>(v) * v;
  }
  const int128 nn = static_cast<int128>(n);
  const int128 spread = nn * sum_sq - sum * sum;  // n^2 * variance

  DistStats s;
  s.n = n;
  s.mean = static_cast<double>(static_cast<long double>(sum) / n);
  s.stddev = static_cast<double>(std::sqrt(static_cast<long double>(spread)) / n);
  s.median = sorted[nearest_rank(n, 1, 2) - 1];
  s.p99 = sorted[nearest_rank(n, 99, 100) - 1];
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

std::vector<std::string> stats_cells(const std::optional<DistStats>& stats, bool as_seconds) {
  if (!stats) return {"0", kNotApplicable, kNotApplicable, kNotApplicable, kNotApplicable};
  if (as_seconds) {
    return {cell(static_cast<std::int64_t>(stats->n)), fixed3(stats->mean / 1000.0),
            fixed3(stats->stddev / 1000.0), seconds(stats->median), seconds(stats->p99)};
  }
  return {cell(static_cast<std::int64_t>(stats->n)), fixed3(stats->mean), fixed3(stats->stddev),
          cell(stats->median), cell(stats->p99)};
}

}  // namespace teletype::analysis
