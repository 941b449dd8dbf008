// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "ontaug/dataset.hpp"

namespace ontaug {

/// Additive smoothing applied to both arguments before every divergence.
inline constexpr double kDefaultSmoothing = 1e-6;

/// (p_i + epsilon) / sum_j (p_j + epsilon).
std::vector<double> smooth(std::span<const double> probs, double epsilon);

/// sum_i p_i ln(p_i / q_i) for already-smoothed, strictly positive inputs.
double kl_smoothed(std::span<const double> p, std::span<const double> q);

/// D_KL(p || q) in nats after smoothing both sides. +inf when either side is
/// the empty distribution. Throws VocabularyMismatch on length mismatch.
double kl_divergence(const PhenotypeDistribution& p, const PhenotypeDistribution& q,
                     double epsilon = kDefaultSmoothing);

}  // namespace ontaug
