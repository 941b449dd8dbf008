// SPDX-License-Identifier: Apache-2.0
#include "ontaug/augment.hpp"

#include <cmath>

#include "ontaug/error.hpp"
#include "ontaug/kernels.hpp"

namespace ontaug {

void AugmentSpec::validate() const {
  if (hops < 1) throw Error(ErrorCode::kInvalidArgument, "hops must be >= 1");
  if (std::isnan(kl_threshold) || kl_threshold < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "kl_threshold must be >= 0");
  }
  if (!(sampling_rate >= 0.0 && sampling_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sampling_rate must lie in [0, 1]");
  }
  if (!(smoothing > 0.0)) throw Error(ErrorCode::kInvalidArgument, "smoothing must be > 0");
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kSeed: return "seed";
    case Origin::kSeedDescendant: return "seed_descendant";
    case Origin::kSampled: return "sampled";
    case Origin::kSampledDescendant: return "sampled_descendant";
  }
  return "unknown";
}

FrontierMap make_frontier(const ConceptGraph& graph, const CodeSet& keys) {
  FrontierMap frontier;
  for (const auto& k : keys) frontier.emplace(k, graph.descendants(k));
  return frontier;
}

std::map<ConceptCode, CodeSet> candidate_parents(const ConceptGraph& graph,
                                                 const FrontierMap& frontier,
                                                 const CodeSet& exclude) {
  std::map<ConceptCode, CodeSet> out;
  for (const auto& [key, below] : frontier) {
    CodeSet candidates = graph.parents(key);
    for (const auto& child : below) {
      const auto& ps = graph.parents(child);
      candidates.insert(ps.begin(), ps.end());
    }
    candidates.erase(key);
    for (const auto& c : below) candidates.erase(c);
    for (const auto& c : exclude) candidates.erase(c);
    out.emplace(key, std::move(candidates));
  }
  return out;
}

std::map<ConceptCode, double> score_candidates(const ConceptGraph& graph, const FrontierMap& frontier,
                                               const std::map<ConceptCode, CodeSet>& candidates,
                                               double kl_threshold, double epsilon) {
  // Index every distribution involved once, then evaluate all
  // (candidate, reference) pairs in one batch.
  std::map<ConceptCode, std::size_t> index;
  std::vector<const PhenotypeDistribution*> dists;
  auto index_of = [&](const ConceptCode& c) {
    auto [it, inserted] = index.emplace(c, dists.size());
    if (inserted) dists.push_back(&graph.node(c).phenotype_dist);
    return it->second;
  };

  std::set<kernels::IndexPair> unique_pairs;
  std::vector<std::pair<ConceptCode, kernels::IndexPair>> owner;
  for (const auto& [key, cands] : candidates) {
    auto fit = frontier.find(key);
    if (fit == frontier.end()) continue;
    const CodeSet& refs = fit->second.empty() ? CodeSet{key} : fit->second;
    for (const auto& q : cands) {
      const std::size_t qi = index_of(q);
      for (const auto& r : refs) {
        const kernels::IndexPair p{qi, index_of(r)};
        if (unique_pairs.insert(p).second) owner.emplace_back(q, p);
      }
    }
  }
  if (owner.empty()) return {};

  const auto rows = kernels::smooth_rows(dists, epsilon);
  std::vector<kernels::IndexPair> pairs;
  pairs.reserve(owner.size());
  for (const auto& [_, p] : owner) pairs.push_back(p);
  const auto values = kernels::kl_pairs_omp(rows, pairs);

  std::map<ConceptCode, double> min_kl;
  for (std::size_t k = 0; k < owner.size(); ++k) {
    auto [it, inserted] = min_kl.emplace(owner[k].first, values[k]);
    if (!inserted && values[k] < it->second) it->second = values[k];
  }
  std::erase_if(min_kl, [&](const auto& entry) { return !(entry.second < kl_threshold); });
  return min_kl;
}

CodeSet mc_sample(Rng& rng, double sampling_rate, const std::map<ConceptCode, double>& scored) {
  CodeSet selected;
  for (const auto& [code, _] : scored) {
    if (rng.uniform() < sampling_rate) selected.insert(selected.end(), code);
  }
  return selected;
}

AugmentResult augment(const ConceptGraph& graph, const AugmentSpec& spec) {
  spec.validate();
  if (spec.seed_codes.empty()) throw Error(ErrorCode::kInvalidArgument, "augment needs seed codes");
  for (const auto& s : spec.seed_codes) {
    if (!graph.contains(s)) {
      throw Error(ErrorCode::kSeedOutsideFilteredGraph, "seed " + s.value + " is not in the filtered graph");
    }
  }

  AugmentResult result;
  result.spec_echo = spec;
  auto add = [&](const ConceptCode& c, Origin origin, int hop, std::optional<double> min_kl) {
    if (result.node_set.insert(c).second) result.provenance.emplace(c, Provenance{origin, hop, min_kl});
  };

  for (const auto& s : spec.seed_codes) add(s, Origin::kSeed, 0, std::nullopt);
  FrontierMap frontier = make_frontier(graph, spec.seed_codes);
  for (const auto& [_, below] : frontier) {
    for (const auto& d : below) add(d, Origin::kSeedDescendant, 0, std::nullopt);
  }

  Rng rng(spec.rng_seed);
  for (int hop = 1; hop <= spec.hops; ++hop) {
    if (frontier.empty()) {
      result.terminated_early = true;
      break;
    }
    const auto candidates = candidate_parents(graph, frontier, result.node_set);
    HopStats stats;
    CodeSet distinct;
    for (const auto& [_, cs] : candidates) distinct.insert(cs.begin(), cs.end());
    stats.candidates = distinct.size();

    const auto scored = score_candidates(graph, frontier, candidates, spec.kl_threshold, spec.smoothing);
    stats.passed_gate = scored.size();
    const auto selected = mc_sample(rng, spec.sampling_rate, scored);
    stats.selected = selected.size();
    result.hop_stats.push_back(stats);

    for (const auto& c : selected) add(c, Origin::kSampled, hop, scored.at(c));
    frontier = make_frontier(graph, selected);
    for (const auto& [_, below] : frontier) {
      for (const auto& d : below) add(d, Origin::kSampledDescendant, hop, std::nullopt);
    }
  }
  for (const auto& c : result.node_set) {
    const auto& ids = graph.node(c).visit_ids;
    result.cohort_visit_ids.insert(ids.begin(), ids.end());
  }
  return result;
}

AugmentResult augment(const FilteredGraph& fg, const AugmentSpec& spec) { return augment(fg.graph, spec); }

Matrix kl_matrix(const ConceptGraph& graph, const std::vector<ConceptCode>& codes, double epsilon) {
  std::vector<const PhenotypeDistribution*> dists;
  dists.reserve(codes.size());
  for (const auto& c : codes) dists.push_back(&graph.node(c).phenotype_dist);
  return kernels::kl_matrix_omp(kernels::smooth_rows(dists, epsilon));
}

nlohmann::json provenance_to_json(const AugmentResult& result) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [code, p] : result.provenance) {
    nlohmann::json entry{{"code", code.value}, {"origin", to_string(p.origin)}, {"hop", p.hop}};
    entry["min_kl"] = p.min_kl ? nlohmann::json(*p.min_kl) : nlohmann::json(nullptr);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace ontaug
