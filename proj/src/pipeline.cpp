// SPDX-License-Identifier: Apache-2.0
#include "ontaug/pipeline.hpp"

#include <fstream>

#include "ontaug/config.hpp"
#include "ontaug/error.hpp"
#include "ontaug/rng.hpp"
#include "ontaug/synthetic.hpp"

namespace ontaug {

LoadedData load_inputs(const std::filesystem::path& ontology, const std::filesystem::path& visits,
                       const std::filesystem::path& vocabulary,
                       const std::optional<std::filesystem::path>& labels) {
  LoadedData data;
  data.dataset = load_dataset(visits, vocabulary);
  const auto edges = load_edge_file(ontology);
  std::map<ConceptCode, std::string> label_map;
  if (labels) label_map = load_label_file(*labels);
  auto built = build_graph(edges, data.dataset, label_map);
  data.graph = std::move(built.graph);
  data.report = built.report;
  return data;
}

LoadedData load_data_dir(const std::filesystem::path& dir) {
  const auto layout = DataDirLayout::in(dir);
  std::optional<std::filesystem::path> labels;
  if (std::filesystem::exists(layout.labels)) labels = layout.labels;
  auto data = load_inputs(layout.ontology, layout.visits, layout.vocabulary, labels);
  if (std::filesystem::exists(layout.manifest)) {
    std::ifstream in(layout.manifest);
    try {
      data.manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, layout.manifest.string() + ": " + e.what());
    }
  }
  return data;
}

std::vector<NamedAugment> augments_from_json(const nlohmann::json& j, const CodeSet& default_seeds) {
  std::vector<NamedAugment> out;
  auto one = [&](const nlohmann::json& item, const std::string& fallback) {
    NamedAugment a;
    a.name = item.is_object() && item.contains("name") && item["name"].is_string()
                 ? item["name"].get<std::string>()
                 : fallback;
    a.spec = augment_spec_from_json(item, default_seeds);
    out.push_back(std::move(a));
  };
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) one(j[i], "Augmented " + std::to_string(i + 1));
  } else {
    one(j, "Augmented");
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidConfig, "no augmentation configured");
  return out;
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json augments = nlohmann::json::array();
  for (const auto& a : config.augments) {
    auto j = to_json(a.spec);
    j["name"] = a.name;
    augments.push_back(std::move(j));
  }
  return {{"filter", to_json(config.filter)},
          {"augment", std::move(augments)},
          {"task", to_json(config.task)},
          {"folds", config.folds},
          {"seed", config.seed},
          {"logistic", to_json(config.logistic)},
          {"random_sizes", config.random_sizes}};
}

std::vector<const VisitRecord*> cohort_records(const VisitDataset& dataset, const std::set<VisitId>& ids) {
  std::vector<const VisitRecord*> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(&dataset.at(id));
  return out;
}

nlohmann::json cohort_manifest(const FilterSpec& filter, const AugmentResult* augment) {
  nlohmann::json parameters{{"filter", to_json(filter)},
                            {"augment", augment ? to_json(augment->spec_echo) : nlohmann::json(nullptr)}};
  return {{"parameters", std::move(parameters)},
          {"seed", augment ? nlohmann::json(augment->spec_echo.rng_seed) : nlohmann::json(nullptr)},
          {"rng_algorithm", std::string(Rng::kAlgorithm)},
          {"selected_nodes", codes_to_json(augment ? augment->spec_echo.seed_codes : filter.selected_codes)},
          {"augmented_nodes", augment ? provenance_to_json(*augment) : nlohmann::json::array()}};
}

RunResult run_pipeline(const LoadedData& data, const RunConfig& config) {
  RunResult result;
  result.filtered = filter(data.graph, data.dataset.vocabulary, config.filter);
  const auto& fg = result.filtered;

  std::vector<NamedCohort> cohorts = build_baseline_cohorts(fg, config.filter, data.dataset, {}, config.seed);
  const auto target = cohorts.front().visit_ids;

  nlohmann::json augment_summaries = nlohmann::json::array();
  for (const auto& a : config.augments) {
    auto r = augment(fg, a.spec);
    std::map<std::string, std::size_t> origin_counts;
    for (const auto& [_, p] : r.provenance) ++origin_counts[std::string(to_string(p.origin))];
    nlohmann::json hops = nlohmann::json::array();
    for (const auto& h : r.hop_stats) {
      hops.push_back({{"candidates", h.candidates}, {"passed_gate", h.passed_gate}, {"selected", h.selected}});
    }
    augment_summaries.push_back({{"name", a.name},
                                 {"node_count", r.node_set.size()},
                                 {"cohort_size", r.cohort_visit_ids.size()},
                                 {"origin_counts", origin_counts},
                                 {"hop_stats", std::move(hops)},
                                 {"terminated_early", r.terminated_early},
                                 {"nodes", codes_to_json(r.node_set)}});
    cohorts.push_back({a.name, r.cohort_visit_ids});
    result.augmented.push_back(std::move(r));
  }

  if (config.random_sizes.empty()) {
    for (std::size_t i = 0; i < config.augments.size(); ++i) {
      cohorts.push_back(random_cohort(fg, target, result.augmented[i].cohort_visit_ids.size(), config.seed,
                                      "Random (size of " + config.augments[i].name + ")"));
    }
  } else {
    auto baselines = build_baseline_cohorts(fg, config.filter, data.dataset, config.random_sizes, config.seed);
    for (std::size_t i = 1; i < baselines.size(); ++i) cohorts.push_back(std::move(baselines[i]));
  }

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : cohorts) {
    result.reports.push_back(
        cross_validate(data.dataset, c.visit_ids, config.task, config.folds, config.seed, config.logistic, c.name));
    rows.push_back(to_json(result.reports.back()));
  }

  const auto stats = filter_summary(fg, data.dataset);
  result.report = {{"title", kComparisonTitle},
                   {"config", to_json(config)},
                   {"filtered_graph",
                    {{"node_count", stats.node_count},
                     {"visit_count", stats.visit_count},
                     {"qualifying_count", fg.qualifying_codes.size()},
                     {"descendant_count", fg.descendant_codes.size()},
                     {"no_qualifying_nodes", fg.no_qualifying_nodes}}},
                   {"target_size", target.size()},
                   {"augmentations", std::move(augment_summaries)},
                   {"rows", std::move(rows)}};
  result.table = format_table(result.reports, std::string(kComparisonTitle) + " (task: " + config.task.name +
                                                  ", " + std::to_string(config.folds) + "-fold CV)");
  return result;
}

}  // namespace ontaug
