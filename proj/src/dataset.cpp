// SPDX-License-Identifier: Apache-2.0
#include "ontaug/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ontaug/error.hpp"

namespace ontaug {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

PhenotypeVocabulary::PhenotypeVocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::kInvalidConfig, "phenotype vocabulary is empty");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw Error(ErrorCode::kInvalidConfig, "empty phenotype name");
    if (!index_.emplace(names_[i], i).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate phenotype name: " + names_[i]);
    }
  }
}

std::optional<std::size_t> PhenotypeVocabulary::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool PhenotypeDistribution::empty() const {
  return std::all_of(probs.begin(), probs.end(), [](double p) { return p == 0.0; });
}

const VisitRecord& VisitDataset::at(const VisitId& id) const {
  auto it = visits.find(id);
  if (it == visits.end()) throw Error(ErrorCode::kInvalidArgument, "unknown visit id: " + id);
  return it->second;
}

PhenotypeVocabulary parse_vocabulary(std::istream& in) {
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    names.push_back(line);
  }
  return PhenotypeVocabulary(std::move(names));
}

PhenotypeVocabulary load_vocabulary(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_vocabulary(in);
}

void write_vocabulary(std::ostream& out, const PhenotypeVocabulary& vocabulary) {
  for (const auto& name : vocabulary.names()) out << name << '\n';
}

nlohmann::json visit_to_json(const VisitRecord& visit) {
  nlohmann::json codes = nlohmann::json::array();
  for (const auto& c : visit.codes) codes.push_back(c.value);
  nlohmann::json labels = nlohmann::json::object();
  for (const auto& [task, value] : visit.labels) labels[task] = value;
  return nlohmann::json{{"visit_id", visit.visit_id},
                        {"patient_id", visit.patient_id},
                        {"codes", std::move(codes)},
                        {"phenotypes", visit.phenotypes},
                        {"features", visit.features},
                        {"labels", std::move(labels)},
                        {"duration_hours", visit.duration_hours}};
}

VisitRecord visit_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("visit is not a JSON object");
  auto require = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(std::string("missing key '") + key + "'");
    return *it;
  };
  auto string_of = [](const nlohmann::json& v, const char* what) {
    if (!v.is_string()) throw std::invalid_argument(std::string(what) + " must be a string");
    return v.get<std::string>();
  };

  VisitRecord visit;
  visit.visit_id = string_of(require("visit_id"), "visit_id");
  if (visit.visit_id.empty()) throw std::invalid_argument("visit_id is empty");
  visit.patient_id = string_of(require("patient_id"), "patient_id");

  const auto& codes = require("codes");
  if (!codes.is_array()) throw std::invalid_argument("codes must be an array");
  for (const auto& c : codes) {
    auto value = string_of(c, "code");
    if (value.empty()) throw std::invalid_argument("empty concept code");
    visit.codes.push_back(ConceptCode{std::move(value)});
  }
  sort_unique(visit.codes);

  const auto& phenotypes = require("phenotypes");
  if (!phenotypes.is_array()) throw std::invalid_argument("phenotypes must be an array");
  for (const auto& p : phenotypes) visit.phenotypes.push_back(string_of(p, "phenotype"));
  sort_unique(visit.phenotypes);

  const auto& features = require("features");
  if (!features.is_array()) throw std::invalid_argument("features must be an array");
  for (const auto& f : features) {
    if (!f.is_number()) throw std::invalid_argument("features must be numbers");
    visit.features.push_back(f.get<double>());
  }

  const auto& labels = require("labels");
  if (!labels.is_object()) throw std::invalid_argument("labels must be an object");
  for (const auto& [task, value] : labels.items()) {
    if (!value.is_number_integer() || (value.get<int>() != 0 && value.get<int>() != 1)) {
      throw std::invalid_argument("label '" + task + "' must be 0 or 1");
    }
    visit.labels[task] = value.get<int>();
  }

  const auto& duration = require("duration_hours");
  if (!duration.is_number() || duration.get<double>() < 0.0) {
    throw std::invalid_argument("duration_hours must be a non-negative number");
  }
  visit.duration_hours = duration.get<double>();
  return visit;
}

VisitDataset parse_visits(std::istream& in, const PhenotypeVocabulary& vocabulary) {
  VisitDataset dataset;
  dataset.vocabulary = vocabulary;
  bool dim_known = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    VisitRecord visit;
    try {
      visit = visit_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      parse_fail(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      parse_fail(line_no, e.what());
    }
    for (const auto& p : visit.phenotypes) {
      if (!vocabulary.contains(p)) {
        throw Error(ErrorCode::kUnknownPhenotype,
                    "line " + std::to_string(line_no) + ": unknown phenotype '" + p + "'");
      }
    }
    if (!dim_known) {
      dataset.feature_dim = visit.features.size();
      dim_known = true;
    } else if (visit.features.size() != dataset.feature_dim) {
      throw Error(ErrorCode::kFeatureDimMismatch,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dataset.feature_dim) + " features, got " +
                      std::to_string(visit.features.size()));
    }
    auto id = visit.visit_id;
    if (!dataset.visits.emplace(id, std::move(visit)).second) {
      throw Error(ErrorCode::kDuplicateVisitId,
                  "line " + std::to_string(line_no) + ": duplicate visit_id '" + id + "'");
    }
  }
  for (std::size_t i = 0; i < dataset.feature_dim; ++i) {
    dataset.feature_names.push_back("f" + std::to_string(i));
  }
  return dataset;
}

VisitDataset load_dataset(const std::filesystem::path& visits_path,
                          const std::filesystem::path& vocabulary_path) {
  auto vocabulary = load_vocabulary(vocabulary_path);
  auto in = open_input(visits_path);
  return parse_visits(in, vocabulary);
}

void write_visits(std::ostream& out, const std::vector<const VisitRecord*>& visits) {
  for (const auto* v : visits) out << visit_to_json(*v).dump() << '\n';
}

std::vector<std::size_t> phenotype_counts(const std::vector<const VisitRecord*>& visits,
                                          const PhenotypeVocabulary& vocabulary) {
  std::vector<std::size_t> counts(vocabulary.size(), 0);
  for (const auto* v : visits) {
    for (const auto& p : v->phenotypes) {
      if (auto idx = vocabulary.index_of(p)) ++counts[*idx];
    }
  }
  return counts;
}

PhenotypeDistribution distribution_from_counts(const std::vector<std::size_t>& counts,
                                               std::size_t support_count) {
  PhenotypeDistribution dist;
  dist.support_count = support_count;
  dist.probs.assign(counts.size(), 0.0);
  const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return dist;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    dist.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return dist;
}

PhenotypeDistribution phenotype_distribution(const std::vector<const VisitRecord*>& visits,
                                             const PhenotypeVocabulary& vocabulary) {
  return distribution_from_counts(phenotype_counts(visits, vocabulary), visits.size());
}

PhenotypeDistribution phenotype_distribution(const std::vector<VisitRecord>& visits,
                                             const PhenotypeVocabulary& vocabulary) {
  std::vector<const VisitRecord*> ptrs;
  ptrs.reserve(visits.size());
  for (const auto& v : visits) ptrs.push_back(&v);
  return phenotype_distribution(ptrs, vocabulary);
}

ExportPaths export_paths(const std::filesystem::path& visits_path) {
  return {visits_path, std::filesystem::path(visits_path.string() + ".vocabulary.txt"),
          std::filesystem::path(visits_path.string() + ".manifest.json")};
}

ExportPaths export_cohort(const std::vector<const VisitRecord*>& visits,
                          const PhenotypeVocabulary& vocabulary, nlohmann::json manifest,
                          const std::filesystem::path& path, std::optional<std::string> timestamp) {
  const auto paths = export_paths(path);
  auto open_output = [](const std::filesystem::path& p) {
    if (p.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + p.string());
    return out;
  };
  {
    auto out = open_output(paths.visits);
    write_visits(out, visits);
    if (!out) throw Error(ErrorCode::kIoError, "write failed: " + paths.visits.string());
  }
  {
    auto out = open_output(paths.vocabulary);
    write_vocabulary(out, vocabulary);
  }
  if (!manifest.is_object()) manifest = nlohmann::json::object();
  manifest["visit_count"] = visits.size();
  manifest["exported_at"] = timestamp ? *timestamp : utc_now();
  {
    auto out = open_output(paths.manifest);
    out << manifest.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::kIoError, "write failed: " + paths.manifest.string());
  }
  return paths;
}

}  // namespace ontaug
