// SPDX-License-Identifier: Apache-2.0
#include "ontaug/session.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "ontaug/config.hpp"
#include "ontaug/error.hpp"

namespace ontaug {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSeedCode:
    case ErrorCode::kUnknownCode:
      return 404;
    default:
      return 400;
  }
}

ServiceResponse fail(int status, const std::string& code, const std::string& message) {
  return {status, error_body(code, message)};
}

ServiceResponse fail(const Error& e) { return fail(status_for(e.code()), std::string(to_string(e.code())), e.what()); }

nlohmann::json kl_value(double v) { return std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v); }

std::string border_for(const AugmentResult* augmented, const ConceptCode& code) {
  if (!augmented) return "default";
  auto it = augmented->provenance.find(code);
  if (it == augmented->provenance.end()) return "default";
  switch (it->second.origin) {
    case Origin::kSeed: return "thick";
    case Origin::kSeedDescendant: return "thin";
    default: return "none";
  }
}

nlohmann::json load_summary(const SessionState& s) {
  const auto& data = *s.data;
  return {{"session_id", nullptr},
          {"node_count", data.graph.size()},
          {"visit_count", data.dataset.visits.size()},
          {"warnings",
           {{"duplicate_edges", data.report.duplicate_edges},
            {"unknown_visit_codes", data.report.unknown_visit_codes},
            {"visits_with_unknown_codes", data.report.visits_with_unknown_codes},
            {"pruned_codes", data.report.pruned_codes}}}};
}

}  // namespace

nlohmann::json error_body(const std::string& code, const std::string& message, const nlohmann::json& detail) {
  return {{"code", code}, {"message", message}, {"detail", detail}};
}

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {}

std::shared_ptr<const SessionState> SessionService::snapshot() const {
  std::lock_guard lock(read_mutex_);
  return state_;
}

void SessionService::publish(std::shared_ptr<const SessionState> next) {
  std::lock_guard lock(read_mutex_);
  state_ = std::move(next);
}

std::string SessionService::now() const {
  if (options_.clock) return options_.clock();
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ServiceResponse SessionService::load(const nlohmann::json& body) {
  if (!body.is_object()) return fail(400, "InvalidArgument", "body must be a JSON object");
  auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) return std::nullopt;
    std::filesystem::path p = it->get<std::string>();
    if (p.is_relative() && !options_.fixture_dir.empty()) p = options_.fixture_dir / p;
    return p;
  };
  const auto ontology = path_of("ontology_path");
  const auto visits = path_of("visits_path");
  const auto vocabulary = path_of("vocabulary_path");
  if (!ontology || !visits || !vocabulary) {
    return fail(400, "InvalidArgument", "ontology_path, visits_path and vocabulary_path are required strings");
  }
  try {
    return install(load_inputs(*ontology, *visits, *vocabulary, path_of("labels_path")), ontology->string());
  } catch (const Error& e) {
    return fail(400, std::string(to_string(e.code())), e.what());
  }
}

ServiceResponse SessionService::install(LoadedData data, const std::string& source) {
  std::lock_guard writer(write_mutex_);
  auto next = std::make_shared<SessionState>();
  if (auto current = snapshot()) next->history = current->history;
  next->data = std::make_shared<const LoadedData>(std::move(data));
  next->history.push_back({now(), "load", {{"source", source}}});
  auto body = load_summary(*next);
  publish(std::move(next));
  return {200, std::move(body)};
}

ServiceResponse SessionService::summary() const {
  const auto s = snapshot();
  if (!s) return fail(409, "NoSession", "no data loaded");
  auto body = load_summary(*s);
  body["stage"] = s->augmented ? "augmented" : s->filtered ? "filtered" : "loaded";
  body["history_length"] = s->history.size();
  if (s->filtered) body["filtered_node_count"] = s->filtered->graph.size();
  if (s->augmented) body["cohort_size"] = s->augmented->cohort_visit_ids.size();
  return {200, std::move(body)};
}

ServiceResponse SessionService::history() const {
  const auto s = snapshot();
  if (!s) return fail(409, "NoSession", "no data loaded");
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& h : s->history) {
    entries.push_back({{"timestamp", h.timestamp}, {"action", h.action}, {"parameters", h.parameters}});
  }
  return {200, {{"session_id", nullptr}, {"history", std::move(entries)}}};
}

ServiceResponse SessionService::filter(const nlohmann::json& body) {
  std::lock_guard writer(write_mutex_);
  const auto current = snapshot();
  if (!current) return fail(409, "NoSession", "no data loaded");
  FilterSpec spec;
  try {
    spec = filter_spec_from_json(body);
    auto fg = std::make_shared<const FilteredGraph>(ontaug::filter(current->data->graph,
                                                                   current->data->dataset.vocabulary, spec));
    auto next = std::make_shared<SessionState>(*current);
    next->filter_spec = spec;
    next->filtered = std::move(fg);
    next->augmented.reset();
    next->history.push_back({now(), "filter", to_json(spec)});
    auto payload = render_payload(*next);
    publish(std::move(next));
    return {200, std::move(payload)};
  } catch (const Error& e) {
    return fail(e);
  }
}

ServiceResponse SessionService::node_detail(const std::string& code) const {
  const auto s = snapshot();
  if (!s) return fail(409, "NoSession", "no data loaded");
  if (!s->filtered) return fail(409, "NoFilter", "apply a filter first");
  const auto& g = s->filtered->graph;
  const ConceptCode c{code};
  if (!g.contains(c)) return fail(404, "UnknownCode", "code " + code + " is not in the filtered graph");
  const auto& node = g.node(c);

  std::vector<ConceptCode> codes{c};
  for (const auto& seed : s->filter_spec->selected_codes) codes.push_back(seed);
  const auto m = kl_matrix(g, codes, s->augmented ? s->augmented->spec_echo.smoothing : kDefaultSmoothing);
  nlohmann::json kl = nlohmann::json::object();
  std::size_t col = 1;
  for (const auto& seed : s->filter_spec->selected_codes) {
    kl[seed.value] = kl_value(seed == c ? 0.0 : m(0, col));
    ++col;
  }
  nlohmann::json counts = nlohmann::json::object();
  const auto& names = s->data->dataset.vocabulary.names();
  for (std::size_t i = 0; i < names.size(); ++i) counts[names[i]] = node.phenotype_counts[i];
  return {200,
          {{"session_id", nullptr},
           {"code", code},
           {"label", node.label},
           {"visit_count", node.visit_ids.size()},
           {"depth", node.depth},
           {"phenotype_dist",
            {{"phenotypes", names}, {"probs", node.phenotype_dist.probs}, {"support_count", node.phenotype_dist.support_count}}},
           {"phenotype_counts", std::move(counts)},
           {"kl_to_selected", std::move(kl)}}};
}

ServiceResponse SessionService::augment(const nlohmann::json& body) {
  std::lock_guard writer(write_mutex_);
  const auto current = snapshot();
  if (!current) return fail(409, "NoSession", "no data loaded");
  if (!current->filtered) return fail(409, "NoFilter", "apply a filter first");
  try {
    if (!body.is_object()) throw Error(ErrorCode::kInvalidArgument, "body must be a JSON object");
    auto request = body;
    request.erase("name");
    const auto spec = augment_spec_from_json(request, current->filter_spec->selected_codes);
    auto result = std::make_shared<const AugmentResult>(ontaug::augment(*current->filtered, spec));
    auto next = std::make_shared<SessionState>(*current);
    next->augmented = std::move(result);
    next->history.push_back({now(), "augment", to_json(spec)});
    auto payload = render_payload(*next);
    publish(std::move(next));
    return {200, std::move(payload)};
  } catch (const Error& e) {
    return fail(400, std::string(to_string(e.code())), e.what());
  }
}

ServiceResponse SessionService::save(const nlohmann::json& body) {
  std::lock_guard writer(write_mutex_);
  const auto current = snapshot();
  if (!current) return fail(409, "NoSession", "no data loaded");
  if (!current->filtered) return fail(409, "NothingToSave", "nothing to save: apply a filter first");
  if (!body.is_object() || !body.contains("path") || !body["path"].is_string()) {
    return fail(400, "InvalidArgument", "path is required");
  }
  const std::filesystem::path path = body["path"].get<std::string>();
  try {
    std::set<VisitId> ids;
    if (current->augmented) {
      ids = current->augmented->cohort_visit_ids;
    } else {
      for (const auto& [_, node] : current->filtered->graph.nodes()) ids.insert(node.visit_ids.begin(), node.visit_ids.end());
    }
    auto manifest = cohort_manifest(*current->filter_spec, current->augmented.get());
    const auto paths = export_cohort(cohort_records(current->data->dataset, ids), current->data->dataset.vocabulary,
                                     manifest, path, now());
    auto next = std::make_shared<SessionState>(*current);
    next->history.push_back({now(), "save", {{"path", path.string()}}});
    publish(std::move(next));
    manifest["visit_count"] = ids.size();
    return {200,
            {{"session_id", nullptr},
             {"visits_path", paths.visits.string()},
             {"vocabulary_path", paths.vocabulary.string()},
             {"manifest_path", paths.manifest.string()},
             {"manifest", std::move(manifest)}}};
  } catch (const Error& e) {
    return fail(e.code() == ErrorCode::kIoError ? 400 : status_for(e.code()), std::string(to_string(e.code())), e.what());
  }
}

ServiceResponse SessionService::reset() {
  std::lock_guard writer(write_mutex_);
  const auto current = snapshot();
  if (!current) return fail(409, "NoSession", "no data loaded");
  auto next = std::make_shared<SessionState>(*current);
  next->filter_spec.reset();
  next->filtered.reset();
  next->augmented.reset();
  next->history.push_back({now(), "reset", nlohmann::json::object()});
  auto body = load_summary(*next);
  body["stage"] = "loaded";
  publish(std::move(next));
  return {200, std::move(body)};
}

nlohmann::json SessionService::render_payload(const SessionState& state) {
  const ConceptGraph& g = state.filtered ? state.filtered->graph : state.data->graph;
  const AugmentResult* augmented = state.augmented.get();

  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& [code, node] : g.nodes()) {
    nlohmann::json n{{"code", code.value},
                     {"label", node.label},
                     {"visit_count", node.visit_ids.size()},
                     {"depth", node.depth},
                     {"border_style", border_for(augmented, code)}};
    if (augmented) {
      if (auto it = augmented->provenance.find(code); it != augmented->provenance.end()) {
        n["origin"] = to_string(it->second.origin);
        n["hop"] = it->second.hop;
        n["min_kl"] = it->second.min_kl ? nlohmann::json(*it->second.min_kl) : nlohmann::json(nullptr);
      }
    }
    nodes.push_back(std::move(n));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({{"parent", e.parent.value}, {"child", e.child.value}});

  // Charts cover the augmented graph after sampling, else the whole view.
  SummaryStats stats = augmented ? summarize(g.induced_subgraph(augmented->node_set), state.data->dataset)
                                 : summarize(g, state.data->dataset);
  nlohmann::json bar = nlohmann::json::array();
  for (const auto& [code, count] : stats.node_visit_counts) bar.push_back({{"code", code.value}, {"visit_count", count}});
  nlohmann::json pie = nlohmann::json::array();
  for (const auto& [name, share] : stats.phenotype_shares) pie.push_back({{"phenotype", name}, {"share", share}});

  nlohmann::json payload{{"session_id", nullptr},
                         {"stage", augmented ? "augmented" : state.filtered ? "filtered" : "loaded"},
                         {"summary", {{"node_count", g.size()}, {"visit_count", summarize(g, state.data->dataset).visit_count}}},
                         {"nodes", std::move(nodes)},
                         {"edges", std::move(edges)},
                         {"bar_chart", std::move(bar)},
                         {"pie_chart", std::move(pie)}};
  if (state.filtered) {
    payload["filter"] = to_json(*state.filter_spec);
    payload["no_qualifying_nodes"] = state.filtered->no_qualifying_nodes;
  }
  if (augmented) {
    std::map<std::string, std::size_t> origin_counts;
    for (const auto& [_, p] : augmented->provenance) ++origin_counts[std::string(to_string(p.origin))];
    nlohmann::json hops = nlohmann::json::array();
    for (const auto& h : augmented->hop_stats) {
      hops.push_back({{"candidates", h.candidates}, {"passed_gate", h.passed_gate}, {"selected", h.selected}});
    }
    payload["augment"] = to_json(augmented->spec_echo);
    payload["cohort_size"] = augmented->cohort_visit_ids.size();
    payload["augmented_node_count"] = augmented->node_set.size();
    payload["origin_counts"] = origin_counts;
    payload["hop_stats"] = std::move(hops);
    payload["terminated_early"] = augmented->terminated_early;
  }
  return payload;
}

}  // namespace ontaug
