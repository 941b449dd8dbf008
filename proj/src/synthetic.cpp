// SPDX-License-Identifier: Apache-2.0
#include "ontaug/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ontaug/error.hpp"
#include "ontaug/rng.hpp"

namespace ontaug {

namespace {

constexpr const char* kClinicalPhenotypes[] = {
    "Congestive heart failure; nonhypertensive",
    "Cardiac dysrhythmias",
    "Essential hypertension",
    "Fluid and electrolyte disorders",
    "Hypertension with complications and secondary hypertension",
    "Acute myocardial infarction",
    "Other lower respiratory disease",
    "Other upper respiratory disease",
    "Respiratory failure; insufficiency; arrest (adult)",
};

std::string code_for(std::size_t i) { return std::to_string(100000 + i); }

std::string visit_id_for(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "V%08zu", i);
  return buf;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) total += out[i] = std::exp(logits[i] - top);
  for (auto& v : out) v /= total;
  return out;
}

// Draws `k` distinct indices, each proportional to the remaining weight.
std::vector<std::size_t> draw_without_replacement(Rng& rng, std::vector<double> weights, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < k; ++n) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) break;
    double u = rng.uniform() * total;
    std::size_t pick = weights.size() - 1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      if (u < weights[i]) {
        pick = i;
        break;
      }
      u -= weights[i];
    }
    while (weights[pick] <= 0.0) --pick;
    out.push_back(pick);
    weights[pick] = 0.0;
  }
  return out;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (node_count < 1) fail("node_count must be >= 1");
  if (branching < 1) fail("branching must be >= 1");
  if (vocabulary_size < 1) fail("vocabulary_size must be >= 1");
  if (min_phenotypes_per_visit < 1 || min_phenotypes_per_visit > max_phenotypes_per_visit ||
      max_phenotypes_per_visit > vocabulary_size) {
    fail("need 1 <= min_phenotypes_per_visit <= max_phenotypes_per_visit <= vocabulary_size");
  }
  if (extra_parent_prob < 0.0 || extra_parent_prob > 1.0) fail("extra_parent_prob must lie in [0, 1]");
  if (extra_parent_window < 1) fail("extra_parent_window must be >= 1");
  if (second_code_prob < 0.0 || second_code_prob > 1.0) fail("second_code_prob must lie in [0, 1]");
  if (base_rate <= 0.0 || base_rate >= 1.0) fail("base_rate must lie in (0, 1)");
  if (profile_spread < 0.0 || profile_drift < 0.0 || branch_drift < 0.0) fail("profile spreads must be >= 0");
  if (signal_features > feature_dim) fail("signal_features exceeds feature_dim");
  if (signal_root_depth < 0 || seed_depth < signal_root_depth) fail("need 0 <= signal_root_depth <= seed_depth");
  if (mean_duration_hours <= 0.0) fail("mean_duration_hours must be > 0");
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "synthetic config must be a JSON object");
  SynthConfig c;
  auto count = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw Error(ErrorCode::kInvalidConfig, key + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "node_count") c.node_count = count(value, key);
      else if (key == "branching") c.branching = count(value, key);
      else if (key == "extra_parent_prob") c.extra_parent_prob = value.get<double>();
      else if (key == "extra_parent_window") c.extra_parent_window = count(value, key);
      else if (key == "max_extra_parents") c.max_extra_parents = count(value, key);
      else if (key == "visit_count") c.visit_count = count(value, key);
      else if (key == "feature_dim") c.feature_dim = count(value, key);
      else if (key == "vocabulary_size") c.vocabulary_size = count(value, key);
      else if (key == "min_phenotypes_per_visit") c.min_phenotypes_per_visit = count(value, key);
      else if (key == "max_phenotypes_per_visit") c.max_phenotypes_per_visit = count(value, key);
      else if (key == "profile_spread") c.profile_spread = value.get<double>();
      else if (key == "profile_drift") c.profile_drift = value.get<double>();
      else if (key == "branch_drift") c.branch_drift = value.get<double>();
      else if (key == "second_code_prob") c.second_code_prob = value.get<double>();
      else if (key == "locality") c.locality = value.get<bool>();
      else if (key == "signal_root_depth") c.signal_root_depth = value.get<int>();
      else if (key == "seed_depth") c.seed_depth = value.get<int>();
      else if (key == "seed_count") c.seed_count = count(value, key);
      else if (key == "interest_phenotype_count") c.interest_phenotype_count = count(value, key);
      else if (key == "signal_features") c.signal_features = count(value, key);
      else if (key == "signal_strength") c.signal_strength = value.get<double>();
      else if (key == "base_rate") c.base_rate = value.get<double>();
      else if (key == "mean_duration_hours") c.mean_duration_hours = value.get<double>();
      else throw Error(ErrorCode::kInvalidConfig, "unknown synthetic config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const SynthConfig& c) {
  return {{"node_count", c.node_count},
          {"branching", c.branching},
          {"extra_parent_prob", c.extra_parent_prob},
          {"extra_parent_window", c.extra_parent_window},
          {"max_extra_parents", c.max_extra_parents},
          {"visit_count", c.visit_count},
          {"feature_dim", c.feature_dim},
          {"vocabulary_size", c.vocabulary_size},
          {"min_phenotypes_per_visit", c.min_phenotypes_per_visit},
          {"max_phenotypes_per_visit", c.max_phenotypes_per_visit},
          {"profile_spread", c.profile_spread},
          {"profile_drift", c.profile_drift},
          {"branch_drift", c.branch_drift},
          {"second_code_prob", c.second_code_prob},
          {"locality", c.locality},
          {"signal_root_depth", c.signal_root_depth},
          {"seed_depth", c.seed_depth},
          {"seed_count", c.seed_count},
          {"interest_phenotype_count", c.interest_phenotype_count},
          {"signal_features", c.signal_features},
          {"signal_strength", c.signal_strength},
          {"base_rate", c.base_rate},
          {"mean_duration_hours", c.mean_duration_hours}};
}

std::vector<std::string> default_phenotype_names(std::size_t size) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < size; ++i) {
    names.push_back(i < std::size(kClinicalPhenotypes) ? kClinicalPhenotypes[i]
                                                        : "Phenotype " + std::to_string(i + 1));
  }
  return names;
}

SynthOutput generate_synthetic(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  Rng root_rng(seed);
  Rng graph_rng = root_rng.split();
  Rng visit_rng = root_rng.split();

  const std::size_t n = config.node_count;
  const std::size_t b = config.branching;
  const std::size_t k = config.vocabulary_size;

  // Tree skeleton and depths.
  std::vector<std::size_t> primary(n, 0);
  std::vector<int> depth(n, 0);
  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t i = 1; i < n; ++i) {
    primary[i] = (i - 1) / b;
    depth[i] = depth[primary[i]] + 1;
    parents[i].push_back(primary[i]);
  }
  // Extra parents: same-depth nodes within extra_parent_window of the primary parent.
  const auto window = static_cast<std::ptrdiff_t>(config.extra_parent_window);
  for (std::size_t i = 1; i < n; ++i) {
    const auto p = static_cast<std::ptrdiff_t>(primary[i]);
    for (std::size_t e = 0; e < config.max_extra_parents; ++e) {
      if (!graph_rng.bernoulli(config.extra_parent_prob)) continue;
      const auto offset = static_cast<std::ptrdiff_t>(graph_rng.uniform_index(2 * config.extra_parent_window)) - window;
      const std::ptrdiff_t q = p + (offset >= 0 ? offset + 1 : offset);
      if (q < 0 || q >= static_cast<std::ptrdiff_t>(i)) continue;
      const auto uq = static_cast<std::size_t>(q);
      if (depth[uq] != depth[primary[i]]) continue;
      if (std::find(parents[i].begin(), parents[i].end(), uq) != parents[i].end()) continue;
      parents[i].push_back(uq);
    }
  }

  // Phenotype logits drift down the primary tree.
  std::vector<std::vector<double>> logits(n, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      if (i == 0) {
        logits[i][f] = 0.0;
      } else if (depth[i] == 1) {
        logits[i][f] = config.profile_spread * graph_rng.normal();
      } else {
        const double drift = depth[i] <= config.signal_root_depth ? config.branch_drift : config.profile_drift;
        logits[i][f] = logits[primary[i]][f] + drift * graph_rng.normal();
      }
    }
  }
  std::vector<std::vector<double>> profile(n);
  for (std::size_t i = 0; i < n; ++i) profile[i] = softmax(logits[i]);

  // Signal subtree: the first node at signal_root_depth, with all its descendants.
  std::vector<char> in_signal(n, 0);
  std::size_t signal_root = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (depth[i] == config.signal_root_depth) {
      signal_root = i;
      break;
    }
  }
  if (config.locality && signal_root == n) {
    throw Error(ErrorCode::kInvalidConfig, "graph has no node at signal_root_depth");
  }
  if (signal_root < n) {
    in_signal[signal_root] = 1;
    for (std::size_t i = signal_root + 1; i < n; ++i) {
      for (auto p : parents[i]) {
        if (in_signal[p]) in_signal[i] = 1;
      }
    }
  }
  // Suggested seeds: evenly spaced over the signal nodes at seed_depth.
  std::vector<std::size_t> at_seed_depth;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_signal[i] && depth[i] == config.seed_depth) at_seed_depth.push_back(i);
  }
  std::vector<std::size_t> seeds;
  const std::size_t wanted = std::min(config.seed_count, at_seed_depth.size());
  for (std::size_t j = 0; j < wanted; ++j) seeds.push_back(at_seed_depth[j * at_seed_depth.size() / wanted]);

  // Fixed signal directions per task.
  const std::vector<std::string> tasks{"mortality", "mi"};
  std::vector<std::vector<double>> direction(tasks.size(), std::vector<double>(config.feature_dim, 0.0));
  for (auto& dir : direction) {
    double norm = 0.0;
    for (std::size_t f = 0; f < config.signal_features; ++f) {
      dir[f] = graph_rng.normal();
      norm += dir[f] * dir[f];
    }
    norm = std::sqrt(norm);
    for (auto& v : dir) v = norm > 0.0 ? v / norm : 0.0;
  }

  SynthOutput out;
  out.dataset.vocabulary = PhenotypeVocabulary(default_phenotype_names(k));
  out.dataset.feature_dim = config.feature_dim;
  for (std::size_t f = 0; f < config.feature_dim; ++f) out.dataset.feature_names.push_back("f" + std::to_string(f));
  for (std::size_t i = 0; i < n; ++i) {
    out.labels[ConceptCode{code_for(i)}] = "Synthetic concept " + std::to_string(i) + " (depth " +
                                           std::to_string(depth[i]) + ")";
    for (auto p : parents[i]) out.edges.push_back({ConceptCode{code_for(p)}, ConceptCode{code_for(i)}});
  }

  const auto& names = out.dataset.vocabulary.names();
  const std::size_t patients = std::max<std::size_t>(1, config.visit_count * 4 / 5);
  const double intercept = logit(config.base_rate);
  std::vector<char> has_visit(n, 0);
  for (std::size_t v = 0; v < config.visit_count; ++v) {
    VisitRecord visit;
    visit.visit_id = visit_id_for(v);
    visit.patient_id = "P" + std::to_string(visit_rng.uniform_index(patients));
    const auto node = static_cast<std::size_t>(visit_rng.uniform_index(n));
    has_visit[node] = 1;
    visit.codes.push_back(ConceptCode{code_for(node)});
    if (node != 0 && visit_rng.bernoulli(config.second_code_prob)) {
      visit.codes.push_back(ConceptCode{code_for(primary[node])});
      has_visit[primary[node]] = 1;
    }
    std::sort(visit.codes.begin(), visit.codes.end());

    const std::size_t span = config.max_phenotypes_per_visit - config.min_phenotypes_per_visit + 1;
    const std::size_t count = config.min_phenotypes_per_visit + visit_rng.uniform_index(span);
    for (auto idx : draw_without_replacement(visit_rng, profile[node], count)) visit.phenotypes.push_back(names[idx]);
    std::sort(visit.phenotypes.begin(), visit.phenotypes.end());

    visit.features.resize(config.feature_dim);
    for (auto& x : visit.features) x = visit_rng.normal();

    for (std::size_t t = 0; t < tasks.size(); ++t) {
      double z = intercept;
      if (config.locality && in_signal[node]) {
        for (std::size_t f = 0; f < config.feature_dim; ++f) z += config.signal_strength * direction[t][f] * visit.features[f];
      }
      const double p = 1.0 / (1.0 + std::exp(-z));
      visit.labels[tasks[t]] = visit_rng.bernoulli(p) ? 1 : 0;
    }
    visit.duration_hours = -config.mean_duration_hours * std::log(1.0 - visit_rng.uniform());
    out.dataset.visits.emplace(visit.visit_id, std::move(visit));
  }

  // Graph size after restricting to visit-bearing codes and their ancestors.
  std::vector<char> kept(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    if (has_visit[i]) kept[i] = 1;
  }
  for (std::size_t i = n; i-- > 0;) {
    if (!kept[i]) continue;
    for (auto p : parents[i]) kept[p] = 1;  // parents have smaller indices, so one backward pass closes
  }

  nlohmann::json signal_codes = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    if (in_signal[i]) signal_codes.push_back(code_for(i));
  }
  nlohmann::json interest = nlohmann::json::array();
  if (signal_root < n) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b2) { return profile[signal_root][a] > profile[signal_root][b2]; });
    for (std::size_t i = 0; i < std::min(k, config.interest_phenotype_count); ++i) interest.push_back(names[order[i]]);
  }
  nlohmann::json seed_codes = nlohmann::json::array();
  for (auto s : seeds) seed_codes.push_back(code_for(s));
  out.manifest = {{"generator", "ontaug-synthetic/1"},
                  {"seed", seed},
                  {"rng_algorithm", std::string(Rng::kAlgorithm)},
                  {"config", to_json(config)},
                  {"ontology_node_count", n},
                  {"edge_count", out.edges.size()},
                  {"graph_node_count", static_cast<std::size_t>(std::count(kept.begin(), kept.end(), 1))},
                  {"visit_count", config.visit_count},
                  {"tasks", tasks},
                  {"signal_root", signal_root < n ? nlohmann::json(code_for(signal_root)) : nlohmann::json(nullptr)},
                  {"signal_codes", std::move(signal_codes)},
                  {"suggested_seed_codes", std::move(seed_codes)},
                  {"suggested_phenotypes", std::move(interest)}};
  return out;
}

DataDirLayout DataDirLayout::in(const std::filesystem::path& dir) {
  return {dir / "ontology.csv", dir / "labels.csv", dir / "visits.jsonl", dir / "vocabulary.txt",
          dir / "manifest.json"};
}

void write_data_dir(const SynthOutput& output, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  const auto layout = DataDirLayout::in(dir);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + p.string());
    return out;
  };
  {
    auto out = open(layout.ontology);
    write_edge_file(out, output.edges);
  }
  {
    auto out = open(layout.labels);
    write_label_file(out, output.labels);
  }
  {
    auto out = open(layout.visits);
    std::vector<const VisitRecord*> visits;
    for (const auto& [_, v] : output.dataset.visits) visits.push_back(&v);
    write_visits(out, visits);
  }
  {
    auto out = open(layout.vocabulary);
    write_vocabulary(out, output.dataset.vocabulary);
  }
  {
    auto out = open(layout.manifest);
    out << output.manifest.dump(2) << '\n';
  }
}

}  // namespace ontaug
