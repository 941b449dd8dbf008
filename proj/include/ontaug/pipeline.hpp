// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontaug/augment.hpp"
#include "ontaug/evaluation.hpp"
#include "ontaug/filter.hpp"
#include "ontaug/graph.hpp"

namespace ontaug {

inline constexpr const char* kComparisonTitle = "Comparison of different data augmentation strategies";

struct LoadedData {
  VisitDataset dataset;
  ConceptGraph graph;
  BuildReport report;
  nlohmann::json manifest;  // generator manifest when the directory has one, else null
};

LoadedData load_inputs(const std::filesystem::path& ontology, const std::filesystem::path& visits,
                       const std::filesystem::path& vocabulary,
                       const std::optional<std::filesystem::path>& labels = std::nullopt);

/// Loads ontology.csv, visits.jsonl, vocabulary.txt and (if present)
/// labels.csv and manifest.json from `dir`.
LoadedData load_data_dir(const std::filesystem::path& dir);

struct NamedAugment {
  std::string name;
  AugmentSpec spec;
};

/// Accepts one augment object or an array of them; each may carry a `name`.
std::vector<NamedAugment> augments_from_json(const nlohmann::json& j, const CodeSet& default_seeds);

struct RunConfig {
  FilterSpec filter;
  std::vector<NamedAugment> augments;
  TaskSpec task;
  int folds = 3;
  std::uint64_t seed = 0;  // CV split and random-baseline sampling
  LogisticConfig logistic;
  /// Explicit Random row sizes. When empty, one size-matched Random row is
  /// added per augmentation.
  std::vector<std::size_t> random_sizes;
};

nlohmann::json to_json(const RunConfig& config);

struct RunResult {
  FilteredGraph filtered;
  std::vector<AugmentResult> augmented;
  std::vector<EvalReport> reports;
  nlohmann::json report;  // deterministic: config, graph stats, augment summaries, rows
  std::string table;
};

RunResult run_pipeline(const LoadedData& data, const RunConfig& config);

/// Manifest written next to an exported cohort. `augment` may be null when
/// only a filter was applied.
nlohmann::json cohort_manifest(const FilterSpec& filter, const AugmentResult* augment);

std::vector<const VisitRecord*> cohort_records(const VisitDataset& dataset, const std::set<VisitId>& ids);

}  // namespace ontaug
