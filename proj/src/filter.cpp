// SPDX-License-Identifier: Apache-2.0
#include "ontaug/filter.hpp"

#include <algorithm>
#include <numeric>

#include "ontaug/error.hpp"

namespace ontaug {

std::size_t occurrence_count(const ConceptNode& node, const PhenotypeVocabulary& vocabulary,
                             const std::string& phenotype) {
  auto idx = vocabulary.index_of(phenotype);
  if (!idx || *idx >= node.phenotype_counts.size()) return 0;
  return node.phenotype_counts[*idx];
}

bool node_qualifies(const ConceptNode& node, const PhenotypeVocabulary& vocabulary,
                    const FilterSpec& spec) {
  if (node.visit_ids.size() <= spec.min_visits) return false;
  return std::any_of(spec.phenotypes_of_interest.begin(), spec.phenotypes_of_interest.end(),
                     [&](const std::string& p) {
                       return occurrence_count(node, vocabulary, p) > spec.min_phenotype_count;
                     });
}

FilteredGraph filter(const ConceptGraph& graph, const PhenotypeVocabulary& vocabulary,
                     const FilterSpec& spec) {
  if (spec.selected_codes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "filter needs at least one selected code");
  }
  for (const auto& s : spec.selected_codes) {
    if (!graph.contains(s)) throw Error(ErrorCode::kUnknownSeedCode, "unknown seed code " + s.value);
  }
  for (const auto& p : spec.phenotypes_of_interest) {
    if (!vocabulary.contains(p)) throw Error(ErrorCode::kUnknownPhenotype, "unknown phenotype " + p);
  }

  CodeSet qualifying;
  for (const auto& [code, node] : graph.nodes()) {
    if (node_qualifies(node, vocabulary, spec)) qualifying.insert(qualifying.end(), code);
  }
  CodeSet candidates = qualifying;
  for (const auto& q : qualifying) {
    for (auto&& d : graph.descendants(q)) candidates.insert(d);
  }
  candidates.insert(spec.selected_codes.begin(), spec.selected_codes.end());

  const auto induced = graph.induced_subgraph(candidates);
  CodeSet kept;
  for (auto& component : induced.weakly_connected_components()) {
    const bool has_seed = std::any_of(spec.selected_codes.begin(), spec.selected_codes.end(),
                                      [&](const ConceptCode& s) { return component.count(s) != 0; });
    if (has_seed) kept.merge(component);
  }

  FilteredGraph fg;
  fg.graph = induced.induced_subgraph(kept);
  fg.seed_codes = spec.selected_codes;
  for (const auto& c : kept) {
    if (qualifying.count(c)) {
      fg.qualifying_codes.insert(c);
    } else if (!spec.selected_codes.count(c)) {
      fg.descendant_codes.insert(c);
    }
  }
  fg.no_qualifying_nodes = fg.qualifying_codes.empty();
  return fg;
}

SummaryStats summarize(const ConceptGraph& graph, const VisitDataset& dataset) {
  SummaryStats stats;
  stats.node_count = graph.size();
  std::set<VisitId> visits;
  for (const auto& [code, node] : graph.nodes()) {
    stats.node_visit_counts.emplace_back(code, node.visit_ids.size());
    visits.insert(node.visit_ids.begin(), node.visit_ids.end());
  }
  std::stable_sort(stats.node_visit_counts.begin(), stats.node_visit_counts.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  stats.visit_count = visits.size();

  std::vector<const VisitRecord*> records;
  records.reserve(visits.size());
  for (const auto& id : visits) records.push_back(&dataset.at(id));
  const auto counts = phenotype_counts(records, dataset.vocabulary);
  const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double share = total == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(total);
    stats.phenotype_shares.emplace_back(dataset.vocabulary.names()[i], share);
  }
  return stats;
}

SummaryStats filter_summary(const FilteredGraph& fg, const VisitDataset& dataset) {
  return summarize(fg.graph, dataset);
}

}  // namespace ontaug
