// SPDX-License-Identifier: Apache-2.0
#include "ontaug/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>

#include "ontaug/csv.hpp"
#include "ontaug/error.hpp"

namespace ontaug {

namespace {

const CodeSet kNoCodes;

// Kahn's algorithm over an arbitrary edge set; returns the topological order
// or throws CycleDetected.
std::vector<ConceptCode> topological_order(const CodeSet& universe, const std::set<Edge>& edges) {
  std::map<ConceptCode, std::size_t> indegree;
  std::map<ConceptCode, std::vector<ConceptCode>> out;
  for (const auto& c : universe) indegree[c] = 0;
  for (const auto& e : edges) {
    if (e.parent == e.child) {
      throw Error(ErrorCode::kCycleDetected, "self-loop on " + e.parent.value);
    }
    ++indegree[e.child];
    out[e.parent].push_back(e.child);
  }
  std::deque<ConceptCode> ready;
  for (const auto& [c, d] : indegree) {
    if (d == 0) ready.push_back(c);
  }
  std::vector<ConceptCode> order;
  order.reserve(universe.size());
  while (!ready.empty()) {
    auto c = std::move(ready.front());
    ready.pop_front();
    if (auto it = out.find(c); it != out.end()) {
      for (const auto& child : it->second) {
        if (--indegree[child] == 0) ready.push_back(child);
      }
    }
    order.push_back(std::move(c));
  }
  if (order.size() != universe.size()) {
    for (const auto& [c, d] : indegree) {
      if (d > 0) {
        throw Error(ErrorCode::kCycleDetected,
                    "directed cycle through or below " + c.value + " (" +
                        std::to_string(universe.size() - order.size()) + " codes unresolved)");
      }
    }
  }
  return order;
}

CodeSet closure(const ConceptCode& start, const std::map<ConceptCode, CodeSet>& adjacency) {
  CodeSet seen;
  std::deque<const ConceptCode*> queue{&start};
  while (!queue.empty()) {
    const ConceptCode* c = queue.front();
    queue.pop_front();
    auto it = adjacency.find(*c);
    if (it == adjacency.end()) continue;
    for (const auto& next : it->second) {
      if (seen.insert(next).second) queue.push_back(&next);
    }
  }
  return seen;
}

}  // namespace

ConceptGraph::ConceptGraph(std::map<ConceptCode, ConceptNode> nodes, std::set<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (!contains(e.parent) || !contains(e.child)) {
      throw Error(ErrorCode::kUnknownCode,
                  "edge " + e.parent.value + " -> " + e.child.value + " has a missing endpoint");
    }
    parents_[e.child].insert(e.parent);
    children_[e.parent].insert(e.child);
  }
  topological_order(codes(), edges_);
}

const ConceptNode& ConceptGraph::node(const ConceptCode& code) const {
  auto it = nodes_.find(code);
  if (it == nodes_.end()) throw Error(ErrorCode::kUnknownCode, "unknown code " + code.value);
  return it->second;
}

CodeSet ConceptGraph::codes() const {
  CodeSet out;
  for (const auto& [c, _] : nodes_) out.insert(out.end(), c);
  return out;
}

const CodeSet& ConceptGraph::parents(const ConceptCode& code) const {
  node(code);
  auto it = parents_.find(code);
  return it == parents_.end() ? kNoCodes : it->second;
}

const CodeSet& ConceptGraph::children(const ConceptCode& code) const {
  node(code);
  auto it = children_.find(code);
  return it == children_.end() ? kNoCodes : it->second;
}

CodeSet ConceptGraph::descendants(const ConceptCode& code) const {
  node(code);
  return closure(code, children_);
}

CodeSet ConceptGraph::ancestors(const ConceptCode& code) const {
  node(code);
  return closure(code, parents_);
}

std::vector<CodeSet> ConceptGraph::weakly_connected_components() const {
  std::vector<CodeSet> components;
  CodeSet assigned;
  // Map iteration is ascending, so each component is discovered from its
  // smallest member and the output is already in the required order.
  for (const auto& [start, _] : nodes_) {
    if (assigned.count(start)) continue;
    CodeSet component{start};
    std::deque<ConceptCode> queue{start};
    while (!queue.empty()) {
      auto c = std::move(queue.front());
      queue.pop_front();
      for (const auto* adjacency : {&parents_, &children_}) {
        auto it = adjacency->find(c);
        if (it == adjacency->end()) continue;
        for (const auto& next : it->second) {
          if (component.insert(next).second) queue.push_back(next);
        }
      }
    }
    assigned.insert(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

ConceptGraph ConceptGraph::induced_subgraph(const CodeSet& keep) const {
  std::map<ConceptCode, ConceptNode> nodes;
  for (const auto& c : keep) {
    auto it = nodes_.find(c);
    if (it != nodes_.end()) nodes.emplace(c, it->second);
  }
  std::set<Edge> edges;
  for (const auto& e : edges_) {
    if (nodes.count(e.parent) && nodes.count(e.child)) edges.insert(e);
  }
  return ConceptGraph(std::move(nodes), std::move(edges));
}

void check_acyclic(const std::vector<Edge>& edges) {
  CodeSet universe;
  for (const auto& e : edges) {
    universe.insert(e.parent);
    universe.insert(e.child);
  }
  topological_order(universe, std::set<Edge>(edges.begin(), edges.end()));
}

BuiltGraph build_graph(const std::vector<Edge>& ontology_edges, const VisitDataset& dataset,
                       const std::map<ConceptCode, std::string>& labels) {
  BuildReport report;
  const std::set<Edge> edge_set(ontology_edges.begin(), ontology_edges.end());
  report.duplicate_edges = ontology_edges.size() - edge_set.size();

  CodeSet universe;
  std::map<ConceptCode, CodeSet> parents_of;
  for (const auto& e : edge_set) {
    universe.insert(e.parent);
    universe.insert(e.child);
    parents_of[e.child].insert(e.parent);
  }
  topological_order(universe, edge_set);

  std::map<ConceptCode, std::vector<const VisitRecord*>> attached;
  for (const auto& [id, visit] : dataset.visits) {
    bool unknown = false;
    for (const auto& code : visit.codes) {
      if (universe.count(code)) {
        attached[code].push_back(&visit);
      } else {
        ++report.unknown_visit_codes;
        unknown = true;
      }
    }
    if (unknown) ++report.visits_with_unknown_codes;
  }

  CodeSet keep;
  for (const auto& [code, _] : attached) {
    if (!keep.insert(code).second) continue;
    for (auto&& a : closure(code, parents_of)) keep.insert(a);
  }
  report.pruned_codes = universe.size() - keep.size();

  std::map<ConceptCode, ConceptNode> nodes;
  for (const auto& code : keep) {
    ConceptNode n;
    n.code = code;
    if (auto it = labels.find(code); it != labels.end()) n.label = it->second;
    std::vector<const VisitRecord*> visits;
    if (auto it = attached.find(code); it != attached.end()) visits = it->second;
    for (const auto* v : visits) n.visit_ids.insert(v->visit_id);
    n.phenotype_counts = phenotype_counts(visits, dataset.vocabulary);
    n.phenotype_dist = distribution_from_counts(n.phenotype_counts, visits.size());
    nodes.emplace(code, std::move(n));
  }
  std::set<Edge> edges;
  for (const auto& e : edge_set) {
    if (keep.count(e.parent) && keep.count(e.child)) edges.insert(e);
  }

  for (const auto& code : topological_order(keep, edges)) {
    auto pit = parents_of.find(code);
    if (pit == parents_of.end()) continue;
    int depth = 0;
    for (const auto& p : pit->second) {
      if (auto nit = nodes.find(p); nit != nodes.end()) depth = std::max(depth, nit->second.depth + 1);
    }
    nodes[code].depth = depth;
  }

  return {ConceptGraph(std::move(nodes), std::move(edges)), report};
}

std::vector<Edge> parse_edge_file(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 2 && fields[0] == "parent_code" && fields[1] == "child_code") continue;
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected header parent_code,child_code");
    }
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected two non-empty codes");
    }
    edges.push_back({ConceptCode{fields[0]}, ConceptCode{fields[1]}});
  }
  return edges;
}

std::vector<Edge> load_edge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_edge_file(in);
}

void write_edge_file(std::ostream& out, const std::vector<Edge>& edges) {
  out << "parent_code,child_code\n";
  for (const auto& e : edges) out << csv_escape(e.parent.value) << ',' << csv_escape(e.child.value) << '\n';
}

std::map<ConceptCode, std::string> parse_label_file(std::istream& in) {
  std::map<ConceptCode, std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (line_no == 1 && fields.size() == 2 && fields[0] == "code" && fields[1] == "label") continue;
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected code,label");
    }
    labels[ConceptCode{fields[0]}] = fields[1];
  }
  return labels;
}

std::map<ConceptCode, std::string> load_label_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_label_file(in);
}

void write_label_file(std::ostream& out, const std::map<ConceptCode, std::string>& labels) {
  out << "code,label\n";
  for (const auto& [code, label] : labels) out << csv_escape(code.value) << ',' << csv_escape(label) << '\n';
}

}  // namespace ontaug
