// Ingest server and store export.

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "teletype/ingest/server.hpp"
#include "teletype/ingest/service.hpp"
#include "teletype/wire.hpp"

using namespace teletype;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Telemetry record ingest service"};
  app.require_subcommand(1);
  std::string store_dir;
  app.add_option("--store", store_dir, "store directory")->required();

  auto* serve = app.add_subcommand("serve", "accept records over HTTP")->fallthrough();
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_body = ingest::IngestService::kDefaultMaxBody;
  serve->add_option("--host", host);
  serve->add_option("--port", port, "0 picks a free port")->check(CLI::Range(0, 65535));
  serve->add_option("--max-body", max_body, "largest accepted request body in bytes")
      ->check(CLI::PositiveNumber);

  auto* exp = app.add_subcommand("export", "write stored records as JSONL")->fallthrough();
  std::string session;
  std::optional<std::int64_t> from_ms, to_ms;
  bool cleaned = false;
  exp->add_option("--session", session, "15-digit session id");
  exp->add_option("--from-ms", from_ms, "inclusive lower bound on server time");
  exp->add_option("--to-ms", to_ms, "exclusive upper bound on server time");
  exp->add_flag("--cleaned", cleaned, "deduplicate and void corrupt edit ranges");

  CLI11_PARSE(app, argc, argv);

  try {
    ingest::RecordStore store(store_dir);
    ingest::IngestService service(store, ingest::wall_clock_ms, max_body);
    if (*exp) {
      ingest::ExportFilter filter;
      if (!session.empty()) {
        filter.session = SessionId::parse(session);
        if (!filter.session) {
          std::cerr << "teletype-ingest: --session needs 15 digits\n";
          return 2;
        }
      }
      filter.from_ms = from_ms;
      filter.to_ms = to_ms;
      filter.cleaned = cleaned;
      for (const auto& r : service.export_records(filter)) std::cout << serialize_record(r) << '\n';
      return 0;
    }

    ingest::IngestServer server(service);
    if (port == 0) {
      port = server.bind_any_port(host);
      if (port < 0) throw std::runtime_error(fmt::format("cannot bind {}", host));
    } else if (!server.bind(host, port)) {
      throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&] {
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
    });
    std::cerr << fmt::format("listening on http://{}:{}\n", host, port);
    server.listen_after_bind();
    g_stop = true;
    watcher.join();
  } catch (const RecordError& e) {
    std::cerr << "teletype-ingest: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "teletype-ingest: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
