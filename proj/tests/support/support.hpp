// SPDX-License-Identifier: Apache-2.0
#pragma once
// Test-only builders and brute-force oracles. Nothing here calls into the
// graph, augment or logistic code under test; it works from raw edge lists.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "ontaug/dataset.hpp"
#include "ontaug/graph.hpp"
#include "ontaug/matrix.hpp"
#include "ontaug/rng.hpp"

namespace testsupport {

using ontaug::CodeSet;
using ontaug::ConceptCode;
using ontaug::Edge;

inline ConceptCode code(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "N%03d", i);
  return ConceptCode{buf};
}

inline CodeSet codes(std::initializer_list<int> ids) {
  CodeSet out;
  for (int i : ids) out.insert(code(i));
  return out;
}

/// Random DAG on n nodes: edge i -> j (i < j) with probability p.
inline std::vector<Edge> random_dag(ontaug::Rng& rng, int n, double p) {
  std::vector<Edge> edges;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (rng.uniform() < p) edges.push_back({code(i), code(j)});
    }
  }
  return edges;
}

/// Strictly positive random distribution over k coordinates.
inline ontaug::PhenotypeDistribution random_distribution(ontaug::Rng& rng, std::size_t k, bool sparse = false) {
  ontaug::PhenotypeDistribution d;
  d.probs.resize(k);
  double sum = 0.0;
  for (auto& v : d.probs) {
    v = (sparse && rng.uniform() < 0.3) ? 0.0 : rng.uniform() + 1e-3;
    sum += v;
  }
  if (sum == 0.0) {
    d.probs[0] = 1.0;
    sum = 1.0;
  }
  for (auto& v : d.probs) v /= sum;
  d.support_count = 1;
  return d;
}

/// Graph with a given distribution per node. Every node carries one
/// synthetic visit id so cohorts are non-empty.
inline ontaug::ConceptGraph make_graph(int n, const std::vector<Edge>& edges,
                                       const std::vector<ontaug::PhenotypeDistribution>& dists) {
  std::map<ConceptCode, ontaug::ConceptNode> nodes;
  for (int i = 0; i < n; ++i) {
    ontaug::ConceptNode node;
    node.code = code(i);
    node.visit_ids = {"v" + node.code.value};
    node.phenotype_dist = dists[static_cast<std::size_t>(i)];
    node.phenotype_counts.assign(node.phenotype_dist.probs.size(), 1);
    nodes.emplace(node.code, std::move(node));
  }
  return ontaug::ConceptGraph(std::move(nodes), std::set<Edge>(edges.begin(), edges.end()));
}

struct Adjacency {
  std::map<ConceptCode, std::vector<ConceptCode>> up;
  std::map<ConceptCode, std::vector<ConceptCode>> down;
};

inline Adjacency adjacency(const std::vector<Edge>& edges) {
  Adjacency a;
  for (const auto& e : edges) {
    a.down[e.parent].push_back(e.child);
    a.up[e.child].push_back(e.parent);
  }
  return a;
}

/// Plain BFS closure along one direction, excluding the start node.
inline CodeSet bfs(const std::map<ConceptCode, std::vector<ConceptCode>>& next, const ConceptCode& start) {
  CodeSet seen;
  std::deque<ConceptCode> queue{start};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    auto it = next.find(cur);
    if (it == next.end()) continue;
    for (const auto& c : it->second) {
      if (c != start && seen.insert(c).second) queue.push_back(c);
    }
  }
  return seen;
}

/// Union-find partition of the node set ignoring direction.
inline std::vector<CodeSet> union_find_components(int n, const std::vector<Edge>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto index = [](const ConceptCode& c) { return std::stoi(c.value.substr(1)); };
  for (const auto& e : edges) {
    int a = find(index(e.parent)), b = find(index(e.child));
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::map<int, CodeSet> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].insert(code(i));
  std::vector<CodeSet> out;
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end(), [](const CodeSet& a, const CodeSet& b) { return *a.begin() < *b.begin(); });
  return out;
}

/// Hand-trace of candidate generation for one frontier key.
inline CodeSet candidates_oracle(const std::vector<Edge>& edges, const ConceptCode& key, const CodeSet& exclude) {
  const auto adj = adjacency(edges);
  const CodeSet below = bfs(adj.down, key);
  CodeSet out;
  auto add_parents = [&](const ConceptCode& c) {
    auto it = adj.up.find(c);
    if (it == adj.up.end()) return;
    for (const auto& p : it->second) out.insert(p);
  };
  add_parents(key);
  for (const auto& d : below) add_parents(d);
  out.erase(key);
  for (const auto& d : below) out.erase(d);
  for (const auto& x : exclude) out.erase(x);
  return out;
}

/// Exhaustive breadth expansion: every parent of the frontier's closure is
/// taken each round, with its descendants.
inline CodeSet breadth_expansion_oracle(const std::vector<Edge>& edges, const CodeSet& seeds, int hops) {
  const auto adj = adjacency(edges);
  CodeSet grown = seeds;
  for (const auto& s : seeds) {
    for (const auto& d : bfs(adj.down, s)) grown.insert(d);
  }
  CodeSet frontier = seeds;
  for (int h = 0; h < hops && !frontier.empty(); ++h) {
    CodeSet closure = frontier;
    for (const auto& f : frontier) {
      for (const auto& d : bfs(adj.down, f)) closure.insert(d);
    }
    CodeSet picked;
    for (const auto& c : closure) {
      auto it = adj.up.find(c);
      if (it == adj.up.end()) continue;
      for (const auto& p : it->second) {
        if (!grown.count(p)) picked.insert(p);
      }
    }
    for (const auto& p : picked) {
      grown.insert(p);
      for (const auto& d : bfs(adj.down, p)) grown.insert(d);
    }
    frontier = picked;
  }
  return grown;
}

/// KL with smoothing evaluated in 50-digit decimal arithmetic.
inline double kl_high_precision(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  using big = boost::multiprecision::cpp_dec_float_50;
  const big e(eps);
  big sp = 0, sq = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += big(p[i]) + e;
    sq += big(q[i]) + e;
  }
  big total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const big pi = (big(p[i]) + e) / sp;
    const big qi = (big(q[i]) + e) / sq;
    total += pi * boost::multiprecision::log(pi / qi);
  }
  return total.convert_to<double>();
}

/// O(n^2) pairwise AUC with ties counted half.
inline double auc_pairwise(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

struct LabelledMatrix {
  ontaug::Matrix x;
  std::vector<int> y;
};

/// Gaussian features; labels from a noisy threshold on two columns.
inline LabelledMatrix labelled_data(ontaug::Rng& rng, std::size_t n, std::size_t d, double signal) {
  LabelledMatrix out{ontaug::Matrix(n, d), std::vector<int>(n)};
  for (auto& v : out.x.data) v = rng.normal();
  for (std::size_t r = 0; r < n; ++r) {
    const double z = signal * (out.x(r, 0) - 0.5 * out.x(r, d - 1)) + 0.3 * rng.normal();
    out.y[r] = z > 0.2 ? 1 : 0;
  }
  return out;
}

/// ||a - b|| / max(||a||, ||b||).
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(ONTAUG_FIXTURE_DIR) / name;
}

}  // namespace testsupport
