// SPDX-License-Identifier: Apache-2.0
#include "ontaug/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ontaug/error.hpp"
#include "ontaug/kl.hpp"

namespace ontaug::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pair_kl(const SmoothedRows& rows, std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  if (rows.empty[i] || rows.empty[j]) return kInf;
  const std::size_t k = rows.probs.cols;
  return kl_smoothed({rows.probs.row(i), k}, {rows.probs.row(j), k});
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Accumulates the unregularized loss sum and gradient sum over [begin, end).
double accumulate_rows(const Matrix& x, std::span<const int> y, std::span<const double> w,
                       std::size_t begin, std::size_t end, double* grad) {
  const std::size_t d = x.cols;
  double loss = 0.0;
  for (std::size_t r = begin; r < end; ++r) {
    const double* row = x.row(r);
    double z = w[0];
    for (std::size_t c = 0; c < d; ++c) z += w[c + 1] * row[c];
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    loss += softplus(z) - y[r] * z;
    const double residual = sigmoid(z) - y[r];
    grad[0] += residual;
    for (std::size_t c = 0; c < d; ++c) grad[c + 1] += residual * row[c];
  }
  return loss;
}

double finish(std::size_t n, std::span<const double> w, double l2, double loss, std::span<double> grad) {
  const double inv_n = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  loss *= inv_n;
  for (auto& g : grad) g *= inv_n;
  for (std::size_t c = 1; c < w.size(); ++c) {
    loss += 0.5 * l2 * w[c] * w[c];
    grad[c] += l2 * w[c];
  }
  return loss;
}

void check_shapes(const Matrix& x, std::span<const int> y, std::span<const double> w,
                  std::span<double> grad) {
  if (y.size() != x.rows || w.size() != x.cols + 1 || grad.size() != w.size()) {
    throw Error(ErrorCode::kInvalidArgument, "logistic kernel shape mismatch");
  }
}

}  // namespace

SmoothedRows smooth_rows(const std::vector<const PhenotypeDistribution*>& dists, double epsilon) {
  const std::size_t k = dists.empty() ? 0 : dists.front()->probs.size();
  SmoothedRows rows{Matrix(dists.size(), k), std::vector<char>(dists.size(), 0)};
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (dists[i]->probs.size() != k) {
      throw Error(ErrorCode::kVocabularyMismatch, "distributions differ in length");
    }
    if (dists[i]->empty()) {
      rows.empty[i] = 1;
      continue;
    }
    const auto s = smooth(dists[i]->probs, epsilon);
    std::copy(s.begin(), s.end(), rows.probs.data.begin() + static_cast<std::ptrdiff_t>(i * k));
  }
  return rows;
}

Matrix kl_matrix_serial(const SmoothedRows& rows) {
  const std::size_t n = rows.probs.rows;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = pair_kl(rows, i, j);
  }
  return m;
}

Matrix kl_matrix_omp(const SmoothedRows& rows) {
  const auto n = static_cast<std::ptrdiff_t>(rows.probs.rows);
  Matrix m(rows.probs.rows, rows.probs.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          pair_kl(rows, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return m;
}

std::vector<double> kl_pairs_serial(const SmoothedRows& rows, std::span<const IndexPair> pairs) {
  std::vector<double> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) out[k] = pair_kl(rows, pairs[k].first, pairs[k].second);
  return out;
}

std::vector<double> kl_pairs_omp(const SmoothedRows& rows, std::span<const IndexPair> pairs) {
  std::vector<double> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto& [i, j] = pairs[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = pair_kl(rows, i, j);
  }
  return out;
}

double logistic_loss_grad_serial(const Matrix& x, std::span<const int> y,
                                 std::span<const double> weights, double l2,
                                 std::span<double> grad) {
  check_shapes(x, y, weights, grad);
  std::fill(grad.begin(), grad.end(), 0.0);
  const double loss = accumulate_rows(x, y, weights, 0, x.rows, grad.data());
  return finish(x.rows, weights, l2, loss, grad);
}

double logistic_loss_grad_omp(const Matrix& x, std::span<const int> y,
                              std::span<const double> weights, double l2, std::span<double> grad) {
  check_shapes(x, y, weights, grad);
  const std::size_t width = weights.size();
  const std::size_t blocks = (x.rows + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> block_grad(blocks * width, 0.0);
  std::vector<double> block_loss(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    const std::size_t begin = ub * kReductionBlock;
    const std::size_t end = std::min(x.rows, begin + kReductionBlock);
    block_loss[ub] = accumulate_rows(x, y, weights, begin, end, block_grad.data() + ub * width);
  }
  // Fixed-order combine keeps results independent of the thread count.
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    loss += block_loss[b];
    for (std::size_t c = 0; c < width; ++c) grad[c] += block_grad[b * width + c];
  }
  return finish(x.rows, weights, l2, loss, grad);
}

}  // namespace ontaug::kernels
