// SPDX-License-Identifier: Apache-2.0
#include "ontaug/kl.hpp"

#include <cmath>
#include <limits>

#include "ontaug/error.hpp"

namespace ontaug {

std::vector<double> smooth(std::span<const double> probs, double epsilon) {
  std::vector<double> out(probs.begin(), probs.end());
  double total = 0.0;
  for (auto& v : out) {
    v += epsilon;
    total += v;
  }
  for (auto& v : out) v /= total;
  return out;
}

double kl_smoothed(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * std::log(p[i] / q[i]);
  // Rounding can leave tiny negatives for near-identical inputs.
  return sum < 0.0 ? 0.0 : sum;
}

double kl_divergence(const PhenotypeDistribution& p, const PhenotypeDistribution& q,
                     double epsilon) {
  if (p.probs.size() != q.probs.size()) {
    throw Error(ErrorCode::kVocabularyMismatch,
                "distributions over " + std::to_string(p.probs.size()) + " and " +
                    std::to_string(q.probs.size()) + " phenotypes");
  }
  if (p.empty() || q.empty()) return std::numeric_limits<double>::infinity();
  const auto ps = smooth(p.probs, epsilon);
  const auto qs = smooth(q.probs, epsilon);
  return kl_smoothed(ps, qs);
}

}  // namespace ontaug
