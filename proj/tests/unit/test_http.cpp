// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <httplib.h>

#include <thread>

#include "ontaug/error.hpp"
#include "ontaug/http_server.hpp"
#include "support.hpp"

using namespace ontaug;
using nlohmann::json;

namespace {

struct LiveServer {
  SessionService service;
  HttpServer server;
  std::thread thread;

  explicit LiveServer(std::size_t max_body = 1 << 20)
      : service(ServiceOptions{ONTAUG_FIXTURE_DIR, {}}), server(service, max_body) {
    REQUIRE(server.bind({"127.0.0.1", 0}));
    thread = std::thread([this] { server.serve(); });
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", server.port());
    c.set_connection_timeout(5);
    c.set_read_timeout(30);
    return c;
  }
};

json post(httplib::Client& c, const std::string& path, const json& body, int expect) {
  auto res = c.Post(path, body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == expect);
  CHECK(res->get_header_value("Content-Type") == "application/json");
  return json::parse(res->body);
}

json get(httplib::Client& c, const std::string& path, int expect) {
  auto res = c.Get(path);
  REQUIRE(res);
  CHECK(res->status == expect);
  return json::parse(res->body);
}

}  // namespace

TEST_CASE("listen address parsing") {
  const auto a = parse_listen_address("127.0.0.1:8080");
  CHECK(a.host == "127.0.0.1");
  CHECK(a.port == 8080);
  CHECK(parse_listen_address("localhost:0").port == 0);
  for (const char* bad : {"8080", ":80", "host:", "host:abc", "host:70000", "host:12x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_listen_address(bad), Error);
  }
}

TEST_CASE("full session over HTTP") {
  LiveServer live;
  auto c = live.client();

  CHECK(get(c, "/session", 409)["code"] == "NoSession");
  post(c, "/session/load",
       {{"ontology_path", "tiny/ontology.csv"},
        {"visits_path", "tiny/visits.jsonl"},
        {"vocabulary_path", "tiny/vocabulary.txt"}},
       200);
  CHECK(get(c, "/session", 200)["node_count"] == 6);

  post(c, "/filter", {{"selected_codes", {"000"}}}, 404);
  const auto f = post(c, "/filter",
                      {{"selected_codes", {"110"}}, {"phenotypes_of_interest", {"Sepsis"}}, {"min_visits", 0}}, 200);
  CHECK(f["stage"] == "filtered");

  CHECK(get(c, "/nodes/111", 200)["visit_count"] == 4);
  CHECK(get(c, "/nodes/555", 404)["code"] == "UnknownCode");

  post(c, "/augment", {{"hops", -1}}, 400);
  const auto a = post(c, "/augment", {{"hops", 1}, {"sampling_rate", 1.0}, {"kl_threshold", "inf"}}, 200);
  CHECK(a["stage"] == "augmented");
  CHECK(a["nodes"].size() == f["nodes"].size());

  const auto dir = std::filesystem::temp_directory_path() / "ontaug_http_save";
  std::filesystem::remove_all(dir);
  const auto saved = post(c, "/save", {{"path", (dir / "c.jsonl").string()}}, 200);
  CHECK(std::filesystem::exists(saved["visits_path"].get<std::string>()));
  std::filesystem::remove_all(dir);

  CHECK(post(c, "/reset", json::object(), 200)["stage"] == "loaded");
  CHECK(get(c, "/session/history", 200)["history"].size() == 5);
}

TEST_CASE("malformed requests") {
  LiveServer live(256);
  auto c = live.client();
  auto res = c.Post("/filter", "{not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body)["code"] == "ParseError");

  res = c.Get("/no/such/route");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(json::parse(res->body)["code"] == "NotFound");

  res = c.Post("/filter", std::string(1000, ' '), "application/json");
  REQUIRE(res);
  CHECK(res->status == 413);
}

TEST_CASE("bind failure is reported") {
  LiveServer first;
  SessionService other;
  HttpServer second(other);
  CHECK_FALSE(second.bind({"127.0.0.1", first.server.port()}));
}
