// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ontaug/dataset.hpp"

namespace ontaug {

struct Edge {
  ConceptCode parent;
  ConceptCode child;

  auto operator<=>(const Edge&) const = default;
  bool operator==(const Edge&) const = default;
};

/// One concept with the visits attached to it. `phenotype_counts[i]` is the
/// number of visits in `visit_ids` carrying phenotype i.
struct ConceptNode {
  ConceptCode code;
  std::string label;
  std::set<VisitId> visit_ids;
  std::vector<std::size_t> phenotype_counts;
  PhenotypeDistribution phenotype_dist;
  int depth = 0;  // longest root-to-node path at build time

  bool operator==(const ConceptNode&) const = default;
};

/// Immutable concept DAG. Multiple parents are allowed; construction rejects
/// dangling edge endpoints and directed cycles (self-loops included).
class ConceptGraph {
 public:
  ConceptGraph() = default;
  ConceptGraph(std::map<ConceptCode, ConceptNode> nodes, std::set<Edge> edges);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  bool contains(const ConceptCode& code) const { return nodes_.count(code) != 0; }

  const ConceptNode& node(const ConceptCode& code) const;
  const std::map<ConceptCode, ConceptNode>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  CodeSet codes() const;

  const CodeSet& parents(const ConceptCode& code) const;
  const CodeSet& children(const ConceptCode& code) const;

  /// Transitive closure of children, excluding `code` itself.
  CodeSet descendants(const ConceptCode& code) const;
  /// Transitive closure of parents, excluding `code` itself.
  CodeSet ancestors(const ConceptCode& code) const;

  /// Partition of the nodes ignoring edge direction, ordered by each
  /// component's smallest code.
  std::vector<CodeSet> weakly_connected_components() const;

  /// Subgraph on `keep` with every edge between kept nodes. Node payloads
  /// (visits, distributions, depth) carry over unchanged.
  ConceptGraph induced_subgraph(const CodeSet& keep) const;

  bool operator==(const ConceptGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::map<ConceptCode, ConceptNode> nodes_;
  std::set<Edge> edges_;
  std::map<ConceptCode, CodeSet> parents_;
  std::map<ConceptCode, CodeSet> children_;
};

struct BuildReport {
  std::size_t duplicate_edges = 0;
  std::size_t unknown_visit_codes = 0;       // code occurrences dropped from visits
  std::size_t visits_with_unknown_codes = 0;
  std::size_t pruned_codes = 0;              // edge-list codes with no visits at or below
};

struct BuiltGraph {
  ConceptGraph graph;
  BuildReport report;
};

/// Restricts the ontology to codes carried by at least one visit plus all
/// their ancestors, attaching visits and phenotype distributions per node.
BuiltGraph build_graph(const std::vector<Edge>& ontology_edges, const VisitDataset& dataset,
                       const std::map<ConceptCode, std::string>& labels = {});

/// Throws CycleDetected naming one code on the cycle.
void check_acyclic(const std::vector<Edge>& edges);

std::vector<Edge> parse_edge_file(std::istream& in);
std::vector<Edge> load_edge_file(const std::filesystem::path& path);
void write_edge_file(std::ostream& out, const std::vector<Edge>& edges);

std::map<ConceptCode, std::string> parse_label_file(std::istream& in);
std::map<ConceptCode, std::string> load_label_file(const std::filesystem::path& path);
void write_label_file(std::ostream& out, const std::map<ConceptCode, std::string>& labels);

}  // namespace ontaug
