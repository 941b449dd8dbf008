// SPDX-License-Identifier: Apache-2.0
#include "ontaug/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ontaug/error.hpp"
#include "ontaug/rng.hpp"

namespace ontaug {

TaskSpec task_preset(const std::string& name) {
  if (name == "mortality") return {"mortality", "mortality", 48.0};
  if (name == "phenotyping") return {"phenotyping", "mi", std::nullopt};
  return {name, name, std::nullopt};
}

std::vector<VisitId> usable_visits(const VisitDataset& dataset, const std::set<VisitId>& ids,
                                   const TaskSpec& task) {
  std::vector<VisitId> out;
  for (const auto& id : ids) {
    const auto& v = dataset.at(id);
    if (!v.labels.count(task.label_key)) {
      throw Error(ErrorCode::kInvalidArgument, "visit " + id + " has no label '" + task.label_key + "'");
    }
    if (task.min_duration_hours && v.duration_hours < *task.min_duration_hours) continue;
    out.push_back(id);
  }
  return out;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 folds");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<int> fold(labels.size());
  std::size_t slot = 0;
  for (auto i : pos) fold[i] = static_cast<int>(slot++ % static_cast<std::size_t>(k));
  for (auto i : neg) fold[i] = static_cast<int>(slot++ % static_cast<std::size_t>(k));
  return fold;
}

EvalReport cross_validate(const VisitDataset& dataset, const std::set<VisitId>& visit_ids,
                          const TaskSpec& task, int k, std::uint64_t seed,
                          const LogisticConfig& config, std::string cohort_name) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 folds");
  const auto ids = usable_visits(dataset, visit_ids, task);
  if (ids.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTooFewVisits,
                std::to_string(ids.size()) + " usable visits for " + std::to_string(k) + " folds");
  }

  EvalReport report;
  report.cohort_name = std::move(cohort_name);
  report.seed = seed;
  report.visit_count = ids.size();
  std::vector<int> labels;
  labels.reserve(ids.size());
  for (const auto& id : ids) labels.push_back(dataset.at(id).labels.at(task.label_key));
  report.positive_count = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  report.negative_count = ids.size() - report.positive_count;

  const auto folds = stratified_folds(labels, k, seed);
  const std::size_t dim = dataset.feature_dim;
  std::vector<double> valid;
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < ids.size(); ++i) (folds[i] == f ? test : train).push_back(i);
    auto gather = [&](const std::vector<std::size_t>& rows, std::vector<int>& y) {
      Matrix x(rows.size(), dim);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& features = dataset.at(ids[rows[r]]).features;
        std::copy(features.begin(), features.end(), x.data.begin() + static_cast<std::ptrdiff_t>(r * dim));
        y.push_back(labels[rows[r]]);
      }
      return x;
    };
    std::vector<int> y_train, y_test;
    const Matrix x_train_raw = gather(train, y_train);
    const Matrix x_test_raw = gather(test, y_test);
    const auto scaler = Standardizer::fit(x_train_raw);
    const auto model = train_logistic(scaler.apply(x_train_raw), y_train, config);
    const auto test_pos = std::count(y_test.begin(), y_test.end(), 1);
    if (model.degenerate || test_pos == 0 || test_pos == static_cast<std::ptrdiff_t>(y_test.size())) {
      report.fold_aucs.push_back(std::nullopt);
      continue;
    }
    const double a = auc(model.decision(scaler.apply(x_test_raw)), y_test);
    report.fold_aucs.push_back(a);
    valid.push_back(a);
  }
  if (!valid.empty()) {
    double sum = 0.0;
    for (double a : valid) sum += a;
    report.auc_mean = sum / static_cast<double>(valid.size());
    double var = 0.0;
    for (double a : valid) var += (a - report.auc_mean) * (a - report.auc_mean);
    report.auc_std = std::sqrt(var / static_cast<double>(valid.size()));
  }
  return report;
}

std::set<VisitId> target_cohort(const FilteredGraph& fg, const FilterSpec& spec,
                                const VisitDataset& dataset) {
  std::set<VisitId> out;
  for (const auto& s : spec.selected_codes) {
    if (!fg.graph.contains(s)) continue;
    for (const auto& id : fg.graph.node(s).visit_ids) {
      const auto& phenotypes = dataset.at(id).phenotypes;
      const bool match = std::any_of(phenotypes.begin(), phenotypes.end(), [&](const std::string& p) {
        return spec.phenotypes_of_interest.count(p) != 0;
      });
      if (match) out.insert(id);
    }
  }
  return out;
}

namespace {

std::vector<VisitId> shuffled_pool(const FilteredGraph& fg, const std::set<VisitId>& target,
                                   std::uint64_t seed) {
  std::set<VisitId> pool;
  for (const auto& [_, node] : fg.graph.nodes()) {
    for (const auto& id : node.visit_ids) {
      if (!target.count(id)) pool.insert(id);
    }
  }
  std::vector<VisitId> order(pool.begin(), pool.end());
  Rng rng(seed);
  rng.shuffle(order);
  return order;
}

NamedCohort top_up(const std::set<VisitId>& target, const std::vector<VisitId>& pool, std::size_t size,
                   std::string name) {
  if (size < target.size()) {
    throw Error(ErrorCode::kInvalidArgument, "requested size " + std::to_string(size) +
                                                 " is below the target cohort size " +
                                                 std::to_string(target.size()));
  }
  if (size > target.size() + pool.size()) {
    throw Error(ErrorCode::kSizeTooLarge, "requested size " + std::to_string(size) + " exceeds the " +
                                              std::to_string(target.size() + pool.size()) +
                                              " visits available");
  }
  NamedCohort cohort{std::move(name), target};
  cohort.visit_ids.insert(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size - target.size()));
  return cohort;
}

}  // namespace

std::vector<NamedCohort> build_baseline_cohorts(const FilteredGraph& fg, const FilterSpec& spec,
                                                const VisitDataset& dataset,
                                                const std::vector<std::size_t>& sizes,
                                                std::uint64_t seed) {
  std::vector<NamedCohort> out;
  out.push_back({"Target", target_cohort(fg, spec, dataset)});
  const auto pool = shuffled_pool(fg, out.front().visit_ids, seed);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out.push_back(top_up(out.front().visit_ids, pool, sizes[i], "Random " + std::to_string(i + 1)));
  }
  return out;
}

NamedCohort random_cohort(const FilteredGraph& fg, const std::set<VisitId>& target, std::size_t size,
                          std::uint64_t seed, std::string name) {
  return top_up(target, shuffled_pool(fg, target, seed), size, std::move(name));
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& a : report.fold_aucs) folds.push_back(a ? nlohmann::json(*a) : nlohmann::json(nullptr));
  return {{"cohort_name", report.cohort_name},   {"visit_count", report.visit_count},
          {"positive_count", report.positive_count}, {"negative_count", report.negative_count},
          {"auc_mean", report.auc_mean},         {"auc_std", report.auc_std},
          {"fold_aucs", std::move(folds)},       {"seed", report.seed}};
}

std::string format_table(const std::vector<EvalReport>& reports, const std::string& title) {
  std::vector<std::array<std::string, 3>> rows;
  rows.push_back({"Data Set", "Data Description", "AUC for LR"});
  char buf[64];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%.2f(%.2f)", r.auc_mean, r.auc_std);
    rows.push_back({r.cohort_name,
                    std::to_string(r.visit_count) + " visits (" + std::to_string(r.positive_count) + " +, " +
                        std::to_string(r.negative_count) + " -)",
                    buf});
  }
  std::array<std::size_t, 3> width{};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < 3; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  out << title << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      out << rows[i][c];
      if (c + 1 < 3) out << std::string(width[c] - rows[i][c].size(), ' ') << " | ";
    }
    out << '\n';
    if (i == 0) out << std::string(width[0] + width[1] + width[2] + 6, '-') << '\n';
  }
  return out.str();
}

}  // namespace ontaug
