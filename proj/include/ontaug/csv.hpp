// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ontaug {

/// Splits one CSV record. Handles double-quoted fields with "" escapes;
/// does not support embedded newlines.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string csv_escape(std::string_view field);

}  // namespace ontaug
