// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ontaug/filter.hpp"
#include "ontaug/kl.hpp"
#include "ontaug/matrix.hpp"
#include "ontaug/rng.hpp"

namespace ontaug {

/// Growth parameters: number of hops, KL gate, per-candidate acceptance
/// probability and the RNG seed that fixes every draw.
struct AugmentSpec {
  CodeSet seed_codes;
  int hops = 1;
  double kl_threshold = std::numeric_limits<double>::infinity();
  double sampling_rate = 0.0;
  std::uint64_t rng_seed = 0;
  double smoothing = kDefaultSmoothing;

  /// Throws InvalidArgument unless hops >= 1, threshold >= 0, rate in [0, 1].
  void validate() const;
  bool operator==(const AugmentSpec&) const = default;
};

/// Frontier node -> its descendants in the filtered graph.
using FrontierMap = std::map<ConceptCode, CodeSet>;

FrontierMap make_frontier(const ConceptGraph& graph, const CodeSet& keys);

/// For each frontier key n: parents of n and of every descendant of n,
/// minus n, its descendants and anything in `exclude` (the growing result).
std::map<ConceptCode, CodeSet> candidate_parents(const ConceptGraph& graph,
                                                 const FrontierMap& frontier,
                                                 const CodeSet& exclude = {});

/// min over the key's descendants (or the key itself when it has none) of
/// D_KL(p_candidate || p_descendant), minimized again across keys. Only
/// candidates strictly below `kl_threshold` are returned.
std::map<ConceptCode, double> score_candidates(const ConceptGraph& graph, const FrontierMap& frontier,
                                               const std::map<ConceptCode, CodeSet>& candidates,
                                               double kl_threshold,
                                               double epsilon = kDefaultSmoothing);

/// Independent Bernoulli(rate) per candidate, one uniform draw each, in
/// ascending code order.
CodeSet mc_sample(Rng& rng, double sampling_rate, const std::map<ConceptCode, double>& scored);

enum class Origin { kSeed, kSeedDescendant, kSampled, kSampledDescendant };

std::string_view to_string(Origin origin);

struct Provenance {
  Origin origin = Origin::kSeed;
  int hop = 0;
  std::optional<double> min_kl;

  bool operator==(const Provenance&) const = default;
};

struct HopStats {
  std::size_t candidates = 0;
  std::size_t passed_gate = 0;
  std::size_t selected = 0;

  bool operator==(const HopStats&) const = default;
};

struct AugmentResult {
  CodeSet node_set;
  std::map<ConceptCode, Provenance> provenance;
  std::set<VisitId> cohort_visit_ids;
  AugmentSpec spec_echo;
  std::vector<HopStats> hop_stats;  // one entry per hop that ran
  bool terminated_early = false;

  bool operator==(const AugmentResult&) const = default;
};

AugmentResult augment(const ConceptGraph& graph, const AugmentSpec& spec);
AugmentResult augment(const FilteredGraph& fg, const AugmentSpec& spec);

/// M(i, j) = D_KL(p_codes[i] || p_codes[j]).
Matrix kl_matrix(const ConceptGraph& graph, const std::vector<ConceptCode>& codes,
                 double epsilon = kDefaultSmoothing);

nlohmann::json provenance_to_json(const AugmentResult& result);

}  // namespace ontaug
