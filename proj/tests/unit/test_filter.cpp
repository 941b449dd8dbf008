// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "ontaug/error.hpp"
#include "ontaug/filter.hpp"
#include "ontaug/pipeline.hpp"
#include "properties.hpp"

using namespace ontaug;
using testsupport::code;

namespace {

// Twelve nodes A..L mapped to N000..N011, phenotype p1 counted per node.
enum : int { A, B, C, D, E, F, G, H, I, J, K, L };

CodeSet nodes(std::initializer_list<int> ids) { return testsupport::codes(ids); }

struct TwelveNodes {
  ConceptGraph graph;
  PhenotypeVocabulary vocabulary{{"p0", "p1", "p2"}};

  TwelveNodes() {
    const std::vector<Edge> edges = {{code(A), code(B)}, {code(A), code(C)}, {code(B), code(D)},
                                     {code(B), code(E)}, {code(C), code(F)}, {code(C), code(G)},
                                     {code(D), code(H)}, {code(E), code(H)}, {code(F), code(I)},
                                     {code(J), code(K)}};
    const std::vector<std::size_t> visits = {150, 90, 120, 101, 100, 5, 200, 3, 0, 300, 10, 500};
    const std::vector<std::size_t> p1 = {3, 0, 10, 6, 50, 0, 5, 0, 0, 100, 0, 200};
    std::vector<std::vector<std::size_t>> counts;
    for (auto x : p1) counts.push_back({0, x, 0});
    graph = testsupport::make_counted_graph(12, edges, visits, counts);
  }

  FilteredGraph run(CodeSet seeds) const {
    FilterSpec spec;
    spec.selected_codes = std::move(seeds);
    spec.phenotypes_of_interest = {"p1"};
    spec.min_visits = 100;
    spec.min_phenotype_count = 5;
    return filter(graph, vocabulary, spec);
  }
};

}  // namespace

TEST_CASE("thresholds are strict on both predicates") {
  const TwelveNodes t;
  FilterSpec spec{{code(A)}, {"p1"}, 100, 5};
  CHECK_FALSE(node_qualifies(t.graph.node(code(E)), t.vocabulary, spec));  // 100 visits
  CHECK_FALSE(node_qualifies(t.graph.node(code(G)), t.vocabulary, spec));  // p1 count 5
  CHECK(node_qualifies(t.graph.node(code(D)), t.vocabulary, spec));
  CHECK_FALSE(node_qualifies(t.graph.node(code(A)), t.vocabulary, spec));
  CHECK(occurrence_count(t.graph.node(code(J)), t.vocabulary, "p1") == 100);
  CHECK(occurrence_count(t.graph.node(code(J)), t.vocabulary, "zz") == 0);
}

TEST_CASE("single seed keeps only its component") {
  const auto fg = TwelveNodes().run(nodes({D}));
  CHECK(fg.graph.codes() == nodes({D, H}));
  CHECK(fg.qualifying_codes == nodes({D}));
  CHECK(fg.descendant_codes == nodes({H}));
  CHECK(fg.seed_codes == nodes({D}));
  CHECK(fg.graph.edges().size() == 1);
  CHECK_FALSE(fg.no_qualifying_nodes);
}

TEST_CASE("two seeds keep two components") {
  const auto fg = TwelveNodes().run(nodes({D, G}));
  CHECK(fg.graph.codes() == nodes({C, D, F, G, H, I}));
  CHECK(fg.qualifying_codes == nodes({C, D}));
  CHECK(fg.descendant_codes == nodes({F, H, I}));
  CHECK(fg.graph.weakly_connected_components().size() == 2);
}

TEST_CASE("non-qualifying seed is retained and joins through its edges") {
  const auto fg = TwelveNodes().run(nodes({E}));
  CHECK(fg.graph.codes() == nodes({D, E, H}));
  CHECK(fg.qualifying_codes == nodes({D}));
  CHECK(fg.descendant_codes == nodes({H}));
}

TEST_CASE("isolated seed with nothing qualifying") {
  TwelveNodes t;
  FilterSpec spec{{code(B)}, {"p0"}, 0, 0};
  const auto fg = filter(t.graph, t.vocabulary, spec);
  CHECK(fg.graph.codes() == nodes({B}));
  CHECK(fg.no_qualifying_nodes);
}

TEST_CASE("payloads carry over unchanged") {
  const TwelveNodes t;
  const auto fg = t.run(nodes({D, G}));
  for (const auto& c : fg.graph.codes()) CHECK(fg.graph.node(c) == t.graph.node(c));
}

TEST_CASE("filter errors") {
  const TwelveNodes t;
  auto code_of = [&](const FilterSpec& spec) {
    try {
      filter(t.graph, t.vocabulary, spec);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error");
    return ErrorCode::kInvalidArgument;
  };
  CHECK(code_of({{ConceptCode{"nope"}}, {"p1"}, 0, 0}) == ErrorCode::kUnknownSeedCode);
  CHECK(code_of({{code(A)}, {"p9"}, 0, 0}) == ErrorCode::kUnknownPhenotype);
  CHECK(code_of({{}, {"p1"}, 0, 0}) == ErrorCode::kInvalidArgument);
}

TEST_CASE("tiny fixture thresholds") {
  const auto data = load_data_dir(testsupport::fixture("tiny"));
  FilterSpec spec{{ConceptCode{"111"}}, {"Acute myocardial infarction"}, 1, 0};
  auto fg = filter(data.graph, data.dataset.vocabulary, spec);
  CHECK(fg.graph.codes() == CodeSet{ConceptCode{"110"}, ConceptCode{"111"}, ConceptCode{"112"}});

  spec.min_visits = 2;
  fg = filter(data.graph, data.dataset.vocabulary, spec);
  CHECK(fg.graph.codes() == CodeSet{ConceptCode{"111"}});

  const auto stats = filter_summary(fg, data.dataset);
  CHECK(stats.visit_count == 4);
  CHECK(stats.node_count == 1);
  REQUIRE(stats.phenotype_shares.size() == 3);
  CHECK(stats.phenotype_shares[0].first == "Sepsis");
  CHECK(stats.phenotype_shares[0].second == doctest::Approx(0.2));
  CHECK(stats.phenotype_shares[1].second == doctest::Approx(0.6));
  CHECK(stats.phenotype_shares[2].second == doctest::Approx(0.2));
}

TEST_CASE("summary shares over one node") {
  VisitDataset ds;
  ds.vocabulary = PhenotypeVocabulary({"p1", "p2"});
  std::map<ConceptCode, ConceptNode> ns;
  ConceptNode n;
  n.code = ConceptCode{"X"};
  for (int i = 0; i < 5; ++i) {
    VisitRecord v;
    v.visit_id = "v" + std::to_string(i);
    v.codes = {n.code};
    v.phenotypes = {i < 3 ? "p1" : "p2"};
    ds.visits.emplace(v.visit_id, v);
    n.visit_ids.insert(v.visit_id);
  }
  ns.emplace(n.code, n);
  const auto stats = summarize(ConceptGraph(ns, {}), ds);
  CHECK(stats.visit_count == 5);
  CHECK(stats.phenotype_shares[0] == std::pair<std::string, double>{"p1", 0.6});
  CHECK(stats.phenotype_shares[1] == std::pair<std::string, double>{"p2", 0.4});
  REQUIRE(stats.node_visit_counts.size() == 1);
  CHECK(stats.node_visit_counts[0].second == 5);
}

TEST_CASE("visit counts sort descending with ties by code") {
  const TwelveNodes t;
  const auto sub = t.graph.induced_subgraph(nodes({A, C, E, G, I}));
  VisitDataset ds;
  ds.vocabulary = t.vocabulary;
  for (const auto& [c, node] : sub.nodes()) {
    for (const auto& id : node.visit_ids) ds.visits[id].visit_id = id;
  }
  const auto stats = summarize(sub, ds);
  CHECK(stats.visit_count == 570);
  REQUIRE(stats.node_visit_counts.size() == 5);
  CHECK(stats.node_visit_counts[0].first == code(G));
  CHECK(stats.node_visit_counts[1].first == code(A));
  CHECK(stats.node_visit_counts[4].first == code(I));
}

TEST_CASE("randomized cases match the oracle and keep their invariants") {
  Rng rng(20240501);
  for (int i = 0; i < 200; ++i) {
    const auto fc = testsupport::random_filter_case(rng);
    CAPTURE(i);
    CHECK(testsupport::check_filter_case(fc) == "");
  }
}
