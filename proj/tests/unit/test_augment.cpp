// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <limits>

#include "ontaug/augment.hpp"
#include "ontaug/error.hpp"
#include "properties.hpp"

using namespace ontaug;
using testsupport::code;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConceptCode c(const char* s) { return ConceptCode{s}; }

PhenotypeDistribution dist(std::vector<double> p) {
  PhenotypeDistribution d;
  d.probs = std::move(p);
  d.support_count = 1;
  return d;
}

ConceptGraph named_graph(const std::vector<Edge>& edges, const std::map<std::string, std::vector<double>>& probs) {
  std::map<ConceptCode, ConceptNode> nodes;
  for (const auto& [name, p] : probs) {
    ConceptNode n;
    n.code = c(name.c_str());
    n.visit_ids = {"v_" + name};
    n.phenotype_dist = dist(p);
    n.phenotype_counts.assign(p.size(), 1);
    nodes.emplace(n.code, n);
  }
  return ConceptGraph(nodes, std::set<Edge>(edges.begin(), edges.end()));
}

// R -> A, R -> B, A -> S, B -> S, S -> T, X -> T, Y -> X
ConceptGraph trace_graph() {
  const std::vector<Edge> edges = {{c("R"), c("A")}, {c("R"), c("B")}, {c("A"), c("S")}, {c("B"), c("S")},
                                   {c("S"), c("T")}, {c("X"), c("T")}, {c("Y"), c("X")}};
  std::map<std::string, std::vector<double>> probs;
  for (const char* n : {"R", "A", "B", "S", "T", "X", "Y"}) probs[n] = {0.5, 0.5};
  return named_graph(edges, probs);
}

CodeSet set_of(std::initializer_list<const char*> names) {
  CodeSet out;
  for (const char* n : names) out.insert(c(n));
  return out;
}

AugmentSpec spec_for(CodeSet seeds, int hops, double gamma, double rate, std::uint64_t seed = 1) {
  AugmentSpec s;
  s.seed_codes = std::move(seeds);
  s.hops = hops;
  s.kl_threshold = gamma;
  s.sampling_rate = rate;
  s.rng_seed = seed;
  return s;
}

}  // namespace

TEST_CASE("hand trace: candidates per frontier key") {
  const auto g = trace_graph();
  const auto frontier = make_frontier(g, set_of({"S"}));
  CHECK(frontier.at(c("S")) == set_of({"T"}));
  const auto cands = candidate_parents(g, frontier, set_of({"S", "T"}));
  CHECK(cands.at(c("S")) == set_of({"A", "B", "X"}));
}

TEST_CASE("hand trace: breadth growth hop by hop") {
  const auto g = trace_graph();
  const auto one = augment(g, spec_for(set_of({"S"}), 1, kInf, 1.0));
  CHECK(one.node_set == set_of({"S", "T", "A", "B", "X"}));
  REQUIRE(one.hop_stats.size() == 1);
  CHECK(one.hop_stats[0] == HopStats{3, 3, 3});

  const auto two = augment(g, spec_for(set_of({"S"}), 2, kInf, 1.0));
  CHECK(two.node_set == g.codes());
  CHECK(two.provenance.at(c("S")).origin == Origin::kSeed);
  CHECK(two.provenance.at(c("T")).origin == Origin::kSeedDescendant);
  CHECK(two.provenance.at(c("A")).origin == Origin::kSampled);
  CHECK(two.provenance.at(c("A")).hop == 1);
  CHECK(two.provenance.at(c("R")).hop == 2);
  CHECK(two.provenance.at(c("Y")).origin == Origin::kSampled);
  CHECK(*two.provenance.at(c("A")).min_kl == 0.0);
  CHECK(two.cohort_visit_ids.size() == 7);
  CHECK_FALSE(two.terminated_early);

  const auto three = augment(g, spec_for(set_of({"S"}), 3, kInf, 1.0));
  CHECK(three.node_set == g.codes());
  CHECK(three.hop_stats.size() == 3);
  CHECK(three.hop_stats[2].candidates == 0);
}

TEST_CASE("sampled parent brings its descendants") {
  const std::vector<Edge> edges = {{c("P"), c("S")}, {c("P"), c("Q")}, {c("Q"), c("Z")}};
  const auto g = named_graph(edges, {{"P", {1, 0}}, {"S", {1, 0}}, {"Q", {0, 1}}, {"Z", {0, 1}}});
  const auto r = augment(g, spec_for(set_of({"S"}), 1, 0.1, 1.0));
  CHECK(r.node_set == set_of({"P", "Q", "S", "Z"}));
  CHECK(r.provenance.at(c("Q")).origin == Origin::kSampledDescendant);
  CHECK(r.provenance.at(c("Z")).hop == 1);
}

TEST_CASE("score is the minimum over the key's descendants and is gated strictly") {
  // Key K has descendants D1, D2; candidate P is a parent of D2.
  const std::vector<Edge> edges = {{c("K"), c("D1")}, {c("K"), c("D2")}, {c("P"), c("D2")}};
  const std::vector<double> pk{0.2, 0.8}, p1{0.9, 0.1}, p2{0.6, 0.4}, pp{0.7, 0.3};
  const auto g = named_graph(edges, {{"K", pk}, {"D1", p1}, {"D2", p2}, {"P", pp}});
  const auto frontier = make_frontier(g, set_of({"K"}));
  const auto cands = candidate_parents(g, frontier, set_of({"K", "D1", "D2"}));
  CHECK(cands.at(c("K")) == set_of({"P"}));

  const double to1 = kl_divergence(dist(pp), dist(p1));
  const double to2 = kl_divergence(dist(pp), dist(p2));
  const double expect = std::min(to1, to2);
  const auto scored = score_candidates(g, frontier, cands, kInf);
  REQUIRE(scored.count(c("P")) == 1);
  CHECK(scored.at(c("P")) == expect);
  CHECK(scored.at(c("P")) != kl_divergence(dist(pp), dist(pk)));
  CHECK(score_candidates(g, frontier, cands, expect).empty());
  CHECK(score_candidates(g, frontier, cands, std::nextafter(expect, kInf)).size() == 1);
}

TEST_CASE("leaf key is scored against itself") {
  const std::vector<Edge> edges = {{c("P"), c("L")}};
  const std::vector<double> pl{0.3, 0.7}, pp{0.5, 0.5};
  const auto g = named_graph(edges, {{"L", pl}, {"P", pp}});
  const auto frontier = make_frontier(g, set_of({"L"}));
  const auto scored = score_candidates(g, frontier, candidate_parents(g, frontier), kInf);
  CHECK(scored.at(c("P")) == kl_divergence(dist(pp), dist(pl)));
}

TEST_CASE("empty distributions never pass, even with an infinite gate") {
  const std::vector<Edge> edges = {{c("P"), c("L")}};
  const auto g = named_graph(edges, {{"L", {0.3, 0.7}}, {"P", {0.0, 0.0}}});
  const auto r = augment(g, spec_for(set_of({"L"}), 1, kInf, 1.0));
  CHECK(r.node_set == set_of({"L"}));
  CHECK(r.hop_stats[0] == HopStats{1, 0, 0});
  CHECK(r.terminated_early == false);
}

TEST_CASE("rate zero stops after the first hop") {
  const auto g = trace_graph();
  const auto r = augment(g, spec_for(set_of({"S"}), 3, kInf, 0.0));
  CHECK(r.node_set == set_of({"S", "T"}));
  CHECK(r.terminated_early);
  REQUIRE(r.hop_stats.size() == 1);
  CHECK(r.hop_stats[0] == HopStats{3, 3, 0});
}

TEST_CASE("mc_sample draws one uniform per candidate") {
  std::map<ConceptCode, double> scored;
  for (int i = 0; i < 10000; ++i) scored.emplace(code(i), 0.0);
  Rng rng(17);
  const auto picked = mc_sample(rng, 0.5, scored);
  const double frac = static_cast<double>(picked.size()) / 10000.0;
  CHECK(frac == doctest::Approx(0.5).epsilon(0.04));
  CHECK(std::abs(frac - 0.5) <= 0.02);

  Rng replay(17);
  CodeSet expect;
  for (const auto& [k, _] : scored) {
    if (replay.uniform() < 0.5) expect.insert(k);
  }
  CHECK(picked == expect);
  CHECK(rng.next_u64() == replay.next_u64());

  Rng r0(5), r1(5);
  CHECK(mc_sample(r0, 0.0, scored).empty());
  CHECK(mc_sample(r1, 1.0, scored).size() == 10000);
}

TEST_CASE("candidate generation matches the hand-trace oracle on random DAGs") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + static_cast<int>(rng.uniform_index(40));
    const auto edges = testsupport::random_dag(rng, n, 3.0 / n);
    std::vector<PhenotypeDistribution> d(static_cast<std::size_t>(n), dist({1.0}));
    const auto g = testsupport::make_graph(n, edges, d);
    CodeSet keys, exclude;
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(0.2)) keys.insert(code(i));
      if (rng.bernoulli(0.2)) exclude.insert(code(i));
    }
    const auto cands = candidate_parents(g, make_frontier(g, keys), exclude);
    REQUIRE(cands.size() == keys.size());
    for (const auto& k : keys) CHECK(cands.at(k) == testsupport::candidates_oracle(edges, k, exclude));
  }
}

TEST_CASE("infinite gate with rate one equals exhaustive breadth expansion") {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    auto ac = testsupport::random_augment_case(rng, 20);
    ac.spec.kl_threshold = kInf;
    ac.spec.sampling_rate = 1.0;
    ac.spec.hops = 1 + t % 2;
    const auto r = augment(ac.graph, ac.spec);
    CHECK(r.node_set == testsupport::breadth_expansion_oracle(ac.kept_edges, ac.spec.seed_codes, ac.spec.hops));
  }
}

TEST_CASE("randomized invariants") {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const auto ac = testsupport::random_augment_case(rng);
    CAPTURE(t);
    CHECK(testsupport::check_augment_case(ac) == "");
  }
}

TEST_CASE("different seeds give different samples") {
  std::map<ConceptCode, double> scored;
  for (int i = 0; i < 64; ++i) scored.emplace(code(i), 0.0);
  Rng a(1), b(2);
  CHECK(mc_sample(a, 0.5, scored) != mc_sample(b, 0.5, scored));
}

TEST_CASE("spec validation and seed checks") {
  const auto g = trace_graph();
  auto code_of = [&](const AugmentSpec& s) {
    try {
      augment(g, s);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error");
    return ErrorCode::kIoError;
  };
  CHECK(code_of(spec_for(set_of({"Q"}), 1, 1.0, 0.5)) == ErrorCode::kSeedOutsideFilteredGraph);
  CHECK(code_of(spec_for({}, 1, 1.0, 0.5)) == ErrorCode::kInvalidArgument);
  CHECK(code_of(spec_for(set_of({"S"}), 0, 1.0, 0.5)) == ErrorCode::kInvalidArgument);
  CHECK(code_of(spec_for(set_of({"S"}), 1, -1.0, 0.5)) == ErrorCode::kInvalidArgument);
  CHECK(code_of(spec_for(set_of({"S"}), 1, 1.0, 1.5)) == ErrorCode::kInvalidArgument);
  auto bad = spec_for(set_of({"S"}), 1, 1.0, 0.5);
  bad.smoothing = 0.0;
  CHECK(code_of(bad) == ErrorCode::kInvalidArgument);
}

TEST_CASE("provenance JSON lists every node in code order") {
  const auto r = augment(trace_graph(), spec_for(set_of({"S"}), 1, kInf, 1.0));
  const auto j = provenance_to_json(r);
  REQUIRE(j.size() == 5);
  CHECK(j[0]["code"] == "A");
  CHECK(j[0]["origin"] == "sampled");
  CHECK(j[0]["hop"] == 1);
  CHECK(j[0]["min_kl"] == 0.0);
  CHECK(j[2]["origin"] == "seed");
  CHECK(j[2]["min_kl"].is_null());
}

TEST_CASE("kl_matrix matches pairwise divergences") {
  const std::vector<Edge> edges;
  const auto g = named_graph(edges, {{"A", {0.2, 0.8}}, {"B", {0.6, 0.4}}, {"C", {0.0, 0.0}}});
  const auto m = kl_matrix(g, {c("A"), c("B"), c("C")});
  CHECK(m(0, 1) == kl_divergence(dist({0.2, 0.8}), dist({0.6, 0.4})));
  CHECK(m(1, 0) == kl_divergence(dist({0.6, 0.4}), dist({0.2, 0.8})));
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 2) == kInf);
}
