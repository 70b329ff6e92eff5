#pragma once

#include <memory>
#include <string>

#include "teletype/ingest/service.hpp"

namespace httplib {
class Server;
}

namespace teletype::ingest {

/// HTTP front end:
///   POST /v1/records  body = wire lines; 200 with {accepted, rejected, errors},
///                     413 when the body exceeds the service limit
///   GET  /v1/export?session=&from_ms=&to_ms=&cleaned=  JSONL response
class IngestServer {
 public:
  explicit IngestServer(IngestService& service);
  ~IngestServer();

  /// Binds to an OS-assigned port and returns it, or -1.
  int bind_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Serves until stop() is called.
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  IngestService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace teletype::ingest
