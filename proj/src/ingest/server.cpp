#include "teletype/ingest/server.hpp"

#include <fmt/format.h>

#include "httplib.h"
#include "teletype/wire.hpp"

namespace teletype::ingest {

namespace {

std::optional<std::int64_t> int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string value = req.get_param_value(name);
  std::size_t used = 0;
  std::int64_t n = std::stoll(value, &used);
  if (used != value.size()) throw std::invalid_argument(name);
  return n;
}

ExportFilter parse_filter(const httplib::Request& req) {
  ExportFilter filter;
  if (req.has_param("session")) {
    filter.session = SessionId::parse(req.get_param_value("session"));
    if (!filter.session) throw std::invalid_argument("session");
  }
  filter.from_ms = int_param(req, "from_ms");
  filter.to_ms = int_param(req, "to_ms");
  if (req.has_param("cleaned")) {
    const auto v = req.get_param_value("cleaned");
    if (v == "1" || v == "true") {
      filter.cleaned = true;
    } else if (v != "0" && v != "false") {
      throw std::invalid_argument("cleaned");
    }
  }
  return filter;
}

}  // namespace

IngestServer::IngestServer(IngestService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  // Oversized bodies are answered by the service; this only guards memory.
  server_->set_payload_max_length(service_.max_body() * 16);

  server_->Post("/v1/records", [this](const httplib::Request& req, httplib::Response& res) {
    IngestResult result = service_.ingest(req.body);
    res.status = result.too_large ? 413 : 200;
    res.set_content(result.to_json(), "application/json");
  });

  server_->Get("/v1/export", [this](const httplib::Request& req, httplib::Response& res) {
    ExportFilter filter;
    try {
      filter = parse_filter(req);
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(fmt::format("{{\"error\":\"bad parameter {}\"}}", e.what()), "application/json");
      return;
    }
    try {
      std::string body;
      for (const auto& r : service_.export_records(filter)) body += serialize_record(r) + '\n';
      res.set_content(body, "application/x-ndjson");
    } catch (const std::exception&) {
      res.status = 500;
      res.set_content("{\"error\":\"store unreadable\"}", "application/json");
    }
  });
}

IngestServer::~IngestServer() = default;

int IngestServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool IngestServer::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }

bool IngestServer::listen_after_bind() { return server_->listen_after_bind(); }

void IngestServer::stop() { server_->stop(); }

void IngestServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace teletype::ingest
