// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontaug/dataset.hpp"
#include "ontaug/graph.hpp"

namespace ontaug {

/// Knobs for the synthetic ontology + visit generator.
///
/// The ontology is a b-ary tree (node i > 0 hangs below (i - 1) / b) with
/// optional extra parents taken from same-depth nodes near the primary
/// parent. Phenotype profiles drift from parent to child, so nearby
/// concepts have similar phenotype mixes. With `locality` on, the task
/// labels depend on the features only for visits whose primary concept lies
/// in one designated subtree; everywhere else they are label noise.
struct SynthConfig {
  std::size_t node_count = 200;
  std::size_t branching = 3;
  double extra_parent_prob = 0.3;
  std::size_t extra_parent_window = 1;  // extra parents lie within this many same-depth positions
  std::size_t max_extra_parents = 1;
  std::size_t visit_count = 5000;
  std::size_t feature_dim = 10;
  std::size_t vocabulary_size = 9;
  std::size_t min_phenotypes_per_visit = 1;
  std::size_t max_phenotypes_per_visit = 3;
  double profile_spread = 2.0;   // std-dev of top-level phenotype logits
  double profile_drift = 0.3;    // std-dev of the per-edge logit perturbation below signal_root_depth
  double branch_drift = 0.3;     // same, for edges into depths 2..signal_root_depth
  double second_code_prob = 0.2; // a visit also carries its concept's parent code
  bool locality = true;
  int signal_root_depth = 2;
  int seed_depth = 3;
  std::size_t seed_count = 2;
  std::size_t interest_phenotype_count = 3;  // top phenotypes of the signal root, suggested as P_u
  std::size_t signal_features = 4;
  double signal_strength = 2.0;
  double base_rate = 0.15;
  double mean_duration_hours = 72.0;

  void validate() const;
};

SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthConfig& config);

struct SynthOutput {
  std::vector<Edge> edges;
  std::map<ConceptCode, std::string> labels;
  VisitDataset dataset;
  nlohmann::json manifest;  // config, seed, signal subtree, suggested seeds and phenotypes, counts
};

/// The nine phenotype names used by default (truncated or extended with
/// "Phenotype <i>" to the requested size).
std::vector<std::string> default_phenotype_names(std::size_t size);

SynthOutput generate_synthetic(const SynthConfig& config, std::uint64_t seed);

/// Conventional file names inside a data directory.
struct DataDirLayout {
  std::filesystem::path ontology;
  std::filesystem::path labels;
  std::filesystem::path visits;
  std::filesystem::path vocabulary;
  std::filesystem::path manifest;

  static DataDirLayout in(const std::filesystem::path& dir);
};

void write_data_dir(const SynthOutput& output, const std::filesystem::path& dir);

}  // namespace ontaug
