// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontaug/dataset.hpp"
#include "ontaug/filter.hpp"
#include "ontaug/logistic.hpp"

namespace ontaug {

struct TaskSpec {
  std::string name;
  std::string label_key;
  std::optional<double> min_duration_hours;  // visits shorter than this are excluded

  bool operator==(const TaskSpec&) const = default;
};

/// Presets: "mortality" (label `mortality`, 48 h minimum stay) and
/// "phenotyping" (label `mi`). Any other name maps to a label of that name.
TaskSpec task_preset(const std::string& name);

struct EvalReport {
  std::string cohort_name;
  std::size_t visit_count = 0;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
  double auc_mean = 0.0;
  double auc_std = 0.0;
  std::vector<std::optional<double>> fold_aucs;  // nullopt marks a flagged fold
  std::uint64_t seed = 0;
  bool operator==(const EvalReport&) const = default;
};

/// Visit ids (ascending) that pass the task's duration rule. Throws
/// InvalidArgument when a visit lacks the task label.
std::vector<VisitId> usable_visits(const VisitDataset& dataset, const std::set<VisitId>& ids,
                                   const TaskSpec& task);

/// Stratified assignment of `labels` to k folds. Positive indices and then
/// negative indices (each in input order) are shuffled with one generator
/// seeded by `seed`; positives are dealt round-robin from fold 0 and
/// negatives continue the same rotation.
std::vector<int> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed);

/// k-fold CV of standardized logistic regression. Folds whose training part
/// is single-class or whose test part lacks a class are flagged (nullopt)
/// and left out of the mean.
EvalReport cross_validate(const VisitDataset& dataset, const std::set<VisitId>& visit_ids,
                          const TaskSpec& task, int k, std::uint64_t seed,
                          const LogisticConfig& config = {}, std::string cohort_name = {});

struct NamedCohort {
  std::string name;
  std::set<VisitId> visit_ids;
};

/// Visits of the seed nodes carrying at least one phenotype of interest.
std::set<VisitId> target_cohort(const FilteredGraph& fg, const FilterSpec& spec,
                                const VisitDataset& dataset);

/// "Target" followed by "Random i" for each size: Target plus a seeded
/// uniform sample without replacement from the remaining filtered-graph
/// visits, topped up to exactly that size.
std::vector<NamedCohort> build_baseline_cohorts(const FilteredGraph& fg, const FilterSpec& spec,
                                                const VisitDataset& dataset,
                                                const std::vector<std::size_t>& sizes,
                                                std::uint64_t seed);

/// Target plus random filtered-graph visits up to `size` (single cohort).
NamedCohort random_cohort(const FilteredGraph& fg, const std::set<VisitId>& target, std::size_t size,
                          std::uint64_t seed, std::string name);

nlohmann::json to_json(const EvalReport& report);

/// Aligned plain-text comparison table: data set | description | AUC mean(std).
std::string format_table(const std::vector<EvalReport>& reports, const std::string& title);

}  // namespace ontaug
