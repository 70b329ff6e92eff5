#pragma once

#include <span>
#include <vector>

#include "teletype/analysis/table.hpp"
#include "teletype/sim/simulator.hpp"

namespace teletype::sim {

/// Every analysis table, in the order of the `all` subcommand, computed from
/// the ground truth of the emitted events. Record counts are recomputed from
/// the raw error lists rather than taken from the records; only cell
/// formatting and the summary statistics are shared with the analysis code.
std::vector<analysis::Table> oracle_metrics(std::span<const Ledger> ledgers, int tz_offset_min = 0);

}  // namespace teletype::sim
