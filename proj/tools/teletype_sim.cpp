// Replays or generates editing sessions.

#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "teletype/analysis/table.hpp"
#include "teletype/sim/generator.hpp"
#include "teletype/sim/oracle.hpp"
#include "teletype/sim/simulator.hpp"

using namespace teletype;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic editing-session simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "replay a scenario through the telemetry client");
  std::string scenario_path, out, ledger_path, oracle_path, config_path;
  // Simulated sessions sample everything unless told otherwise.
  double p_event = 1.0, p_session = 1.0;
  std::uint64_t run_seed = 0;
  std::size_t max_steps = 0;
  sim::RunOptions options;
  run->add_option("scenario", scenario_path)->required()->check(CLI::ExistingFile);
  run->add_option("--config", config_path, "client config JSON; flags override it")
      ->check(CLI::ExistingFile);
  auto* p_event_opt = run->add_option("--p-event", p_event)->check(CLI::Range(0.0, 1.0));
  auto* p_session_opt = run->add_option("--p-session", p_session)->check(CLI::Range(0.0, 1.0));
  auto* seed_opt = run->add_option("--seed", run_seed);
  auto* steps_opt = run->add_option("--max-steps", max_steps, "analysis work budget per module")
                        ->check(CLI::PositiveNumber);
  run->add_option("--gap-ms", options.event_gap_ms, "simulated time per action")
      ->check(CLI::PositiveNumber);
  run->add_flag("--per-char", options.per_char, "one analysis per typed character");
  run->add_option("--out", out, "records: a JSONL file or an http:// ingest URL");
  run->add_option("--ledger", ledger_path, "ground-truth ledger (JSON)");
  run->add_option("--oracle", oracle_path, "metric tables computed from the ledger (CSV)");

  auto* gen = app.add_subcommand("generate", "write a random scenario");
  std::uint64_t seed = 0;
  sim::GeneratorParams params;
  std::vector<double> mix;
  std::string scenario_out;
  gen->add_option("--seed", seed);
  gen->add_option("--modules", params.n_modules)->check(CLI::NonNegativeNumber);
  gen->add_option("--actions", params.n_actions)->check(CLI::NonNegativeNumber);
  gen->add_option("--mix", mix, "nocheck,nonstrict,strict probabilities")->delimiter(',')->expected(3);
  gen->add_option("--typo-rate", params.typo_rate)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", scenario_out, "scenario file; stdout when absent");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (!mix.empty()) params.mode_mix = {mix[0], mix[1], mix[2]};
      const auto text = sim::format_scenario(sim::gen_random_scenario(seed, params));
      if (scenario_out.empty()) {
        std::cout << text;
      } else {
        write_file(scenario_out, text);
      }
      return 0;
    }

    client::ClientConfig config;
    if (!config_path.empty()) {
      config = client::load_client_config(config_path);
    } else {
      config.sampler.p_event = p_event;
      config.sampler.p_session = p_session;
    }
    if (*p_event_opt) config.sampler.p_event = p_event;
    if (*p_session_opt) config.sampler.p_session = p_session;
    if (*seed_opt) config.sampler.seed = run_seed;
    if (*steps_opt) config.budget.max_steps = max_steps;
    if (out.empty()) out = config.sink;

    std::unique_ptr<client::RecordSink> sink;
    if (!out.empty()) sink = client::make_sink(out);
    const auto scenario = sim::load_scenario(scenario_path);
    auto result = sim::run_scenario(scenario, config, options, sink.get());
    if (sink) sink->flush();
    if (auto* http = dynamic_cast<client::HttpSink*>(sink.get()); http && http->dropped() > 0) {
      std::cerr << fmt::format("teletype-sim: {} records could not be delivered\n", http->dropped());
      return 1;
    }
    if (!ledger_path.empty()) write_file(ledger_path, sim::ledger_to_json(result.ledger) + "\n");
    if (!oracle_path.empty()) {
      write_file(oracle_path, analysis::to_csv(sim::oracle_metrics(std::span(&result.ledger, 1))));
    }
    std::cerr << fmt::format("session {}: {} events, {} records\n", result.ledger.session_id.str(),
                             result.ledger.events.size(), result.records.size());
  } catch (const sim::ScenarioError& e) {
    std::cerr << "teletype-sim: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "teletype-sim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
