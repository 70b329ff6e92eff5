#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "teletype/analysis/table.hpp"

namespace teletype::analysis {

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<double>& values);

/// One point series per legend entry.
std::string scatter_svg(const std::string& title, const std::string& x_label,
                        const std::string& y_label,
                        const std::map<std::string, std::vector<std::pair<double, double>>>& series);

/// Static plot for a subcommand's tables. Throws std::invalid_argument when
/// the subcommand has no plot.
std::string plot_metric(const std::string& metric, const std::vector<Table>& tables);

}  // namespace teletype::analysis
