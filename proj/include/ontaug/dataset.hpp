// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace ontaug {

/// Opaque concept identifier (e.g. a SNOMED CT id rendered as text).
struct ConceptCode {
  std::string value;

  auto operator<=>(const ConceptCode&) const = default;
  bool operator==(const ConceptCode&) const = default;
};

using CodeSet = std::set<ConceptCode>;
using VisitId = std::string;

/// Ordered phenotype names; the order fixes the coordinate layout of every
/// PhenotypeDistribution built against it.
class PhenotypeVocabulary {
 public:
  PhenotypeVocabulary() = default;
  explicit PhenotypeVocabulary(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  bool operator==(const PhenotypeVocabulary& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct VisitRecord {
  VisitId visit_id;
  std::string patient_id;
  std::vector<ConceptCode> codes;        // sorted, unique
  std::vector<std::string> phenotypes;   // sorted, unique
  std::vector<double> features;
  std::map<std::string, int> labels;
  double duration_hours = 0.0;

  bool operator==(const VisitRecord&) const = default;
};

/// Empirical distribution over a vocabulary. Empty (all zeros) when no
/// phenotype occurrence was observed.
struct PhenotypeDistribution {
  std::vector<double> probs;
  std::size_t support_count = 0;

  bool empty() const;
  bool operator==(const PhenotypeDistribution&) const = default;
};

struct VisitDataset {
  std::map<VisitId, VisitRecord> visits;
  PhenotypeVocabulary vocabulary;
  std::size_t feature_dim = 0;
  std::vector<std::string> feature_names;

  const VisitRecord& at(const VisitId& id) const;
};

PhenotypeVocabulary parse_vocabulary(std::istream& in);
PhenotypeVocabulary load_vocabulary(const std::filesystem::path& path);
void write_vocabulary(std::ostream& out, const PhenotypeVocabulary& vocabulary);

/// Parses a JSON Lines visit stream. Errors carry the 1-based line number.
VisitDataset parse_visits(std::istream& in, const PhenotypeVocabulary& vocabulary);
VisitDataset load_dataset(const std::filesystem::path& visits_path,
                          const std::filesystem::path& vocabulary_path);

nlohmann::json visit_to_json(const VisitRecord& visit);
VisitRecord visit_from_json(const nlohmann::json& j);
void write_visits(std::ostream& out, const std::vector<const VisitRecord*>& visits);

/// Number of visits carrying each phenotype, aligned to the vocabulary.
/// Phenotypes are a set per visit, so this equals the occurrence count.
std::vector<std::size_t> phenotype_counts(const std::vector<const VisitRecord*>& visits,
                                          const PhenotypeVocabulary& vocabulary);

PhenotypeDistribution distribution_from_counts(const std::vector<std::size_t>& counts,
                                               std::size_t support_count);

/// probs[i] = occurrences of phenotype i / total occurrences. A visit with k
/// phenotypes contributes k occurrences.
PhenotypeDistribution phenotype_distribution(const std::vector<VisitRecord>& visits,
                                             const PhenotypeVocabulary& vocabulary);
PhenotypeDistribution phenotype_distribution(const std::vector<const VisitRecord*>& visits,
                                             const PhenotypeVocabulary& vocabulary);

struct ExportPaths {
  std::filesystem::path visits;
  std::filesystem::path vocabulary;
  std::filesystem::path manifest;
};

ExportPaths export_paths(const std::filesystem::path& visits_path);

/// Writes the visits as JSON Lines plus two sidecars: `<path>.vocabulary.txt`
/// and `<path>.manifest.json`. The manifest receives `visit_count` and
/// `exported_at` on top of whatever the caller supplied.
ExportPaths export_cohort(const std::vector<const VisitRecord*>& visits,
                          const PhenotypeVocabulary& vocabulary, nlohmann::json manifest,
                          const std::filesystem::path& path,
                          std::optional<std::string> timestamp = std::nullopt);

}  // namespace ontaug
