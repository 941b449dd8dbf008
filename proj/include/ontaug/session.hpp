// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontaug/augment.hpp"
#include "ontaug/filter.hpp"
#include "ontaug/pipeline.hpp"

namespace ontaug {

struct HistoryEntry {
  std::string timestamp;
  std::string action;
  nlohmann::json parameters;
};

/// One analyst session. Immutable once published; every mutation builds a
/// new state and swaps it in.
struct SessionState {
  std::shared_ptr<const LoadedData> data;
  std::optional<FilterSpec> filter_spec;
  std::shared_ptr<const FilteredGraph> filtered;
  std::shared_ptr<const AugmentResult> augmented;
  std::vector<HistoryEntry> history;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  std::filesystem::path fixture_dir;           // base for relative load paths
  std::function<std::string()> clock;          // history timestamps; UTC now when empty
};

/// JSON request/response core of the HTTP service, independent of the
/// transport. Mutations are serialized; readers work on a snapshot.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = {});

  ServiceResponse load(const nlohmann::json& body);
  /// Installs already-loaded data (used by `serve --data`).
  ServiceResponse install(LoadedData data, const std::string& source);
  ServiceResponse summary() const;
  ServiceResponse filter(const nlohmann::json& body);
  ServiceResponse node_detail(const std::string& code) const;
  ServiceResponse augment(const nlohmann::json& body);
  ServiceResponse save(const nlohmann::json& body);
  ServiceResponse reset();
  ServiceResponse history() const;

  std::shared_ptr<const SessionState> snapshot() const;

  /// Graph view for the current state: nodes with border styles, edges and
  /// chart series. Pure function of the state.
  static nlohmann::json render_payload(const SessionState& state);

 private:
  void publish(std::shared_ptr<const SessionState> next);
  std::string now() const;

  ServiceOptions options_;
  std::mutex write_mutex_;
  mutable std::mutex read_mutex_;
  std::shared_ptr<const SessionState> state_;
};

nlohmann::json error_body(const std::string& code, const std::string& message, const nlohmann::json& detail = nullptr);

}  // namespace ontaug
