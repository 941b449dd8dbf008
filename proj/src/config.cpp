// SPDX-License-Identifier: Apache-2.0
#include "ontaug/config.hpp"

#include <cmath>
#include <limits>

#include "ontaug/error.hpp"

namespace ontaug {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); }

void require_object(const nlohmann::json& j, const char* what) {
  if (!j.is_object()) bad(std::string(what) + " must be a JSON object");
}

double threshold_from_json(const nlohmann::json& v) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
    bad("kl_threshold string must be \"inf\"");
  }
  if (!v.is_number()) bad("kl_threshold must be a number or \"inf\"");
  return v.get<double>();
}

std::size_t count_from_json(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) bad(key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

template <typename Fn>
void with_json_errors(Fn&& fn) {
  try {
    fn();
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

}  // namespace

nlohmann::json codes_to_json(const CodeSet& codes) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : codes) out.push_back(c.value);
  return out;
}

CodeSet codes_from_json(const nlohmann::json& j) {
  if (!j.is_array()) bad("codes must be an array of strings");
  CodeSet out;
  for (const auto& c : j) {
    if (!c.is_string() || c.get<std::string>().empty()) bad("codes must be non-empty strings");
    out.insert(ConceptCode{c.get<std::string>()});
  }
  return out;
}

FilterSpec filter_spec_from_json(const nlohmann::json& j) {
  require_object(j, "filter spec");
  FilterSpec spec;
  with_json_errors([&] {
    for (const auto& [key, value] : j.items()) {
      if (key == "selected_codes" || key == "codes") {
        spec.selected_codes = codes_from_json(value);
      } else if (key == "phenotypes_of_interest" || key == "phenotypes") {
        spec.phenotypes_of_interest = value.get<std::set<std::string>>();
      } else if (key == "min_visits") {
        spec.min_visits = count_from_json(value, key);
      } else if (key == "min_phenotype_count") {
        spec.min_phenotype_count = count_from_json(value, key);
      } else {
        bad("unknown filter key '" + key + "'");
      }
    }
  });
  if (spec.selected_codes.empty()) bad("filter spec needs selected_codes");
  return spec;
}

nlohmann::json to_json(const FilterSpec& spec) {
  return {{"selected_codes", codes_to_json(spec.selected_codes)},
          {"phenotypes_of_interest", spec.phenotypes_of_interest},
          {"min_visits", spec.min_visits},
          {"min_phenotype_count", spec.min_phenotype_count}};
}

AugmentSpec augment_spec_from_json(const nlohmann::json& j, const CodeSet& default_seeds) {
  require_object(j, "augment spec");
  AugmentSpec spec;
  spec.seed_codes = default_seeds;
  with_json_errors([&] {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed_codes") {
        spec.seed_codes = codes_from_json(value);
      } else if (key == "hops") {
        if (!value.is_number_integer()) bad("hops must be an integer");
        spec.hops = value.get<int>();
      } else if (key == "kl_threshold") {
        spec.kl_threshold = threshold_from_json(value);
      } else if (key == "sampling_rate") {
        spec.sampling_rate = value.get<double>();
      } else if (key == "rng_seed") {
        if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)) {
          bad("rng_seed must be a non-negative integer");
        }
        spec.rng_seed = value.get<std::uint64_t>();
      } else if (key == "smoothing") {
        spec.smoothing = value.get<double>();
      } else if (key == "name") {
        // Row label for reports; not part of the spec.
      } else {
        bad("unknown augment key '" + key + "'");
      }
    }
  });
  try {
    spec.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return spec;
}

nlohmann::json to_json(const AugmentSpec& spec) {
  return {{"seed_codes", codes_to_json(spec.seed_codes)},
          {"hops", spec.hops},
          {"kl_threshold", std::isinf(spec.kl_threshold) ? nlohmann::json("inf") : nlohmann::json(spec.kl_threshold)},
          {"sampling_rate", spec.sampling_rate},
          {"rng_seed", spec.rng_seed},
          {"smoothing", spec.smoothing}};
}

LogisticConfig logistic_config_from_json(const nlohmann::json& j) {
  require_object(j, "logistic config");
  LogisticConfig c;
  with_json_errors([&] {
    for (const auto& [key, value] : j.items()) {
      if (key == "learning_rate") c.learning_rate = value.get<double>();
      else if (key == "iterations") c.iterations = value.get<int>();
      else if (key == "l2") c.l2 = value.get<double>();
      else if (key == "tolerance") c.tolerance = value.get<double>();
      else bad("unknown logistic key '" + key + "'");
    }
  });
  return c;
}

nlohmann::json to_json(const LogisticConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"iterations", c.iterations}, {"l2", c.l2}, {"tolerance", c.tolerance}};
}

nlohmann::json to_json(const TaskSpec& task) {
  return {{"name", task.name},
          {"label_key", task.label_key},
          {"min_duration_hours", task.min_duration_hours ? nlohmann::json(*task.min_duration_hours) : nlohmann::json(nullptr)}};
}

}  // namespace ontaug
