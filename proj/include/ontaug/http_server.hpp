// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "ontaug/session.hpp"

namespace ontaug {

struct ListenAddress {
  std::string host;
  int port = 0;
};

/// Parses "host:port" (port 0 picks a free port). Throws InvalidArgument.
ListenAddress parse_listen_address(const std::string& text);

/// HTTP/JSON binding of SessionService:
///   POST /session/load, GET /session, GET /session/history,
///   POST /filter, GET /nodes/{code}, POST /augment, POST /save, POST /reset.
class HttpServer {
 public:
  HttpServer(SessionService& service, std::size_t max_body_bytes = 1 << 20);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving. Returns false when the address is unusable.
  bool bind(const ListenAddress& address);
  int port() const { return port_; }

  /// Blocks until stop() is called.
  bool serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace ontaug
