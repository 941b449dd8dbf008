// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "ontaug/augment.hpp"
#include "ontaug/evaluation.hpp"
#include "ontaug/filter.hpp"

namespace ontaug {

// JSON field names mirror the struct field names. `kl_threshold` accepts a
// number, the string "inf", or null (both meaning +inf); it is written back
// as "inf" when infinite. Unknown keys are rejected with InvalidConfig.

FilterSpec filter_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FilterSpec& spec);

/// `seed_codes` may be omitted; `default_seeds` fills it in that case.
AugmentSpec augment_spec_from_json(const nlohmann::json& j, const CodeSet& default_seeds = {});
nlohmann::json to_json(const AugmentSpec& spec);

LogisticConfig logistic_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LogisticConfig& config);

nlohmann::json to_json(const TaskSpec& task);

nlohmann::json codes_to_json(const CodeSet& codes);
CodeSet codes_from_json(const nlohmann::json& j);

}  // namespace ontaug
