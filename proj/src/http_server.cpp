// SPDX-License-Identifier: Apache-2.0
#include "ontaug/http_server.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

#include "ontaug/error.hpp"

namespace ontaug {

ListenAddress parse_listen_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw Error(ErrorCode::kInvalidArgument, "listen address must look like host:port, got '" + text + "'");
  }
  ListenAddress out;
  out.host = text.substr(0, colon);
  const auto port_text = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    out.port = std::stoi(port_text, &used);
    if (used != port_text.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in '" + text + "'");
  }
  if (out.port < 0 || out.port > 65535) throw Error(ErrorCode::kInvalidArgument, "port out of range in '" + text + "'");
  return out;
}

struct HttpServer::Impl {
  httplib::Server server;
  std::atomic<bool> serving{false};
  std::atomic<bool> stop_requested{false};
};

namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

template <typename Fn>
void with_body(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
  nlohmann::json body = nlohmann::json::object();
  if (!req.body.empty()) {
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
      reply(res, {400, error_body("ParseError", "request body is not valid JSON", e.what())});
      return;
    }
  }
  reply(res, fn(body));
}

}  // namespace

HttpServer::HttpServer(SessionService& service, std::size_t max_body_bytes) : impl_(std::make_unique<Impl>()) {
  auto& s = impl_->server;
  s.set_payload_max_length(max_body_bytes);
  // SO_REUSEADDR only; binding a port in use fails.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  s.Post("/session/load", [&service](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const nlohmann::json& b) { return service.load(b); });
  });
  s.Get("/session", [&service](const httplib::Request&, httplib::Response& res) { reply(res, service.summary()); });
  s.Get("/session/history", [&service](const httplib::Request&, httplib::Response& res) { reply(res, service.history()); });
  s.Post("/filter", [&service](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const nlohmann::json& b) { return service.filter(b); });
  });
  s.Get(R"(/nodes/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.node_detail(req.matches[1]));
  });
  s.Post("/augment", [&service](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const nlohmann::json& b) { return service.augment(b); });
  });
  s.Post("/save", [&service](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const nlohmann::json& b) { return service.save(b); });
  });
  s.Post("/reset", [&service](const httplib::Request&, httplib::Response& res) { reply(res, service.reset()); });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    reply(res, {500, error_body("Internal", message)});
  });
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(error_body(res.status == 404 ? "NotFound" : "HttpError", "HTTP " + std::to_string(res.status)).dump(),
                      "application/json");
    }
  });
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind(const ListenAddress& address) {
  if (address.port == 0) {
    const int p = impl_->server.bind_to_any_port(address.host);
    if (p <= 0) return false;
    port_ = p;
    return true;
  }
  if (!impl_->server.bind_to_port(address.host, address.port)) return false;
  port_ = address.port;
  return true;
}

bool HttpServer::serve() {
  impl_->serving = true;
  if (impl_->stop_requested) {
    impl_->serving = false;
    return true;
  }
  const bool ok = impl_->server.listen_after_bind();
  impl_->serving = false;
  return ok;
}

// Also stops a serve() call that has not reached its accept loop yet.
void HttpServer::stop() {
  if (!impl_) return;
  impl_->stop_requested = true;
  while (impl_->serving && !impl_->server.is_running()) std::this_thread::yield();
  impl_->server.stop();
}

}  // namespace ontaug
