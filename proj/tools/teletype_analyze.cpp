// Computes metric tables from a record store or a JSONL file.

#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "teletype/analysis/metrics.hpp"
#include "teletype/analysis/svg.hpp"
#include "teletype/cleaning.hpp"
#include "teletype/ingest/store.hpp"

using namespace teletype;

int main(int argc, char** argv) {
  CLI::App app{"Metric tables over collected telemetry records"};
  app.require_subcommand(1);
  std::string store;
  bool cleaned = false;
  std::string mode_name;
  int tz_offset_min = 0;
  std::string format = "csv";
  std::string plot;
  app.add_option("--store", store, "store directory or JSONL file")->required();
  app.add_flag("--cleaned", cleaned, "input is already cleaned; skip the cleaning pass");
  app.add_option("--mode", mode_name, "error_popularity: one mode only")
      ->check(CLI::IsMember({"nocheck", "nonstrict", "strict"}));
  app.add_option("--tz-offset-min", tz_offset_min, "hour bucketing offset from UTC in minutes");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--plot", plot, "write an SVG plot of the tables");

  std::vector<std::string> names = analysis::metric_names();
  names.push_back("all");
  for (const auto& name : names) {
    app.add_subcommand(name, name == "all" ? "every table" : name)->fallthrough();
  }
  CLI11_PARSE(app, argc, argv);
  const std::string metric = app.get_subcommands().front()->get_name();

  std::vector<TelemetryRecord> records;
  try {
    records = ingest::read_records(store);
  } catch (const RecordError& e) {
    std::cerr << "teletype-analyze: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "teletype-analyze: " << e.what() << "\n";
    return 1;
  }
  if (!cleaned) records = clean(records);

  analysis::MetricOptions options;
  options.tz_offset_min = tz_offset_min;
  if (!mode_name.empty()) options.mode = mode_from_string(mode_name);
  const auto tables = analysis::compute_metric(metric, records, options);

  if (!plot.empty()) {
    try {
      std::ofstream out(plot, std::ios::binary);
      out << analysis::plot_metric(metric, tables);
      if (!out) throw std::runtime_error(fmt::format("cannot write {}", plot));
    } catch (const std::exception& e) {
      std::cerr << "teletype-analyze: " << e.what() << "\n";
      return 1;
    }
  }
  std::cout << (format == "json" ? analysis::to_json(tables) : analysis::to_csv(tables));
  return 0;
}
