// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ontaug/graph.hpp"

namespace ontaug {

/// User filter parameters: seed codes, phenotypes of interest (disjunctive),
/// minimum visits per node and minimum visits per phenotype of interest.
struct FilterSpec {
  CodeSet selected_codes;
  std::set<std::string> phenotypes_of_interest;
  std::size_t min_visits = 0;
  std::size_t min_phenotype_count = 0;

  bool operator==(const FilterSpec&) const = default;
};

struct FilteredGraph {
  ConceptGraph graph;
  CodeSet seed_codes;
  CodeSet qualifying_codes;   // passed both thresholds directly
  CodeSet descendant_codes;   // kept only as descendants of a qualifying node
  bool no_qualifying_nodes = false;
};

/// Visits of `node` carrying `phenotype`; zero for names outside the vocabulary.
std::size_t occurrence_count(const ConceptNode& node, const PhenotypeVocabulary& vocabulary,
                             const std::string& phenotype);

/// Both predicates are strict: |V_n| > min_visits and some phenotype of
/// interest is carried by more than min_phenotype_count visits of n.
bool node_qualifies(const ConceptNode& node, const PhenotypeVocabulary& vocabulary,
                    const FilterSpec& spec);

/// Keeps qualifying nodes, all their descendants and the seed codes, then
/// drops every weakly connected component of the induced subgraph that has
/// no seed code. Node payloads are not recomputed.
FilteredGraph filter(const ConceptGraph& graph, const PhenotypeVocabulary& vocabulary,
                     const FilterSpec& spec);

struct SummaryStats {
  std::size_t visit_count = 0;   // distinct visits across all nodes
  std::size_t node_count = 0;
  std::vector<std::pair<ConceptCode, std::size_t>> node_visit_counts;  // descending, ties by code
  std::vector<std::pair<std::string, double>> phenotype_shares;        // vocabulary order
};

SummaryStats summarize(const ConceptGraph& graph, const VisitDataset& dataset);
SummaryStats filter_summary(const FilteredGraph& fg, const VisitDataset& dataset);

}  // namespace ontaug
