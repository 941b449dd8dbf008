// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference
// (`*_serial`) kept for tests and benchmarks, and an OpenMP variant
// (`*_omp`) used by the library. The OpenMP variants are deterministic
// regardless of thread count.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ontaug/dataset.hpp"
#include "ontaug/matrix.hpp"

namespace ontaug::kernels {

/// Smoothed rows for a batch of distributions; `empty[i]` marks rows whose
/// source distribution had no occurrences (their divergences are +inf).
struct SmoothedRows {
  Matrix probs;
  std::vector<char> empty;
};

SmoothedRows smooth_rows(const std::vector<const PhenotypeDistribution*>& dists, double epsilon);

/// M(i, j) = D_KL(row i || row j); zero diagonal.
Matrix kl_matrix_serial(const SmoothedRows& rows);
Matrix kl_matrix_omp(const SmoothedRows& rows);

using IndexPair = std::pair<std::size_t, std::size_t>;

/// out[k] = D_KL(row pairs[k].first || row pairs[k].second).
std::vector<double> kl_pairs_serial(const SmoothedRows& rows, std::span<const IndexPair> pairs);
std::vector<double> kl_pairs_omp(const SmoothedRows& rows, std::span<const IndexPair> pairs);

/// Mean logistic loss plus 0.5 * l2 * |w[1:]|^2, with `weights[0]` the
/// unpenalized intercept. Writes the gradient into `grad` (same length as
/// weights) and returns the loss.
double logistic_loss_grad_serial(const Matrix& x, std::span<const int> y,
                                 std::span<const double> weights, double l2,
                                 std::span<double> grad);
double logistic_loss_grad_omp(const Matrix& x, std::span<const int> y,
                              std::span<const double> weights, double l2, std::span<double> grad);

/// Row count per reduction block in the OpenMP logistic kernel.
inline constexpr std::size_t kReductionBlock = 256;

}  // namespace ontaug::kernels
