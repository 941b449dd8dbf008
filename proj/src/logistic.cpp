// SPDX-License-Identifier: Apache-2.0
#include "ontaug/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ontaug/error.hpp"
#include "ontaug/kernels.hpp"

namespace ontaug {

double LogisticModel::decision(const double* row) const {
  double z = weights[0];
  for (std::size_t c = 1; c < weights.size(); ++c) z += weights[c] * row[c - 1];
  return z;
}

std::vector<double> LogisticModel::decision(const Matrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = decision(x.row(r));
  return out;
}

double logistic_loss(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                     double l2, std::vector<double>* grad) {
  std::vector<double> scratch(weights.size());
  const double loss = kernels::logistic_loss_grad_omp(x, y, weights, l2, scratch);
  if (grad) *grad = std::move(scratch);
  return loss;
}

LogisticModel train_logistic(const Matrix& x, std::span<const int> y, const LogisticConfig& config) {
  if (y.size() != x.rows) throw Error(ErrorCode::kInvalidArgument, "feature/label row mismatch");
  for (double v : x.data) {
    if (std::isnan(v)) throw Error(ErrorCode::kInvalidArgument, "NaN feature");
  }
  LogisticModel model;
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    model.degenerate = true;
    return model;
  }

  model.weights.assign(x.cols + 1, 0.0);
  std::vector<double> grad(model.weights.size());
  for (int it = 0; it < config.iterations; ++it) {
    const double loss = kernels::logistic_loss_grad_omp(x, y, model.weights, config.l2, grad);
    model.loss_history.push_back(loss);
    const double norm = std::sqrt(std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0));
    if (norm < config.tolerance) {
      model.converged = true;
      break;
    }
    for (std::size_t c = 0; c < grad.size(); ++c) model.weights[c] -= config.learning_rate * grad[c];
    ++model.iterations_run;
  }
  return model;
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  s.mean.assign(x.cols, 0.0);
  s.scale.assign(x.cols, 1.0);
  if (x.rows == 0) return s;
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) s.mean[c] += x(r, c);
  }
  for (auto& m : s.mean) m /= static_cast<double>(x.rows);
  std::vector<double> var(x.cols, 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) {
      const double d = x(r, c) - s.mean[c];
      var[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < x.cols; ++c) {
    const double sd = std::sqrt(var[c] / static_cast<double>(x.rows));
    s.scale[c] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  Matrix out = x;
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
  }
  return out;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::kInvalidArgument, "score/label length mismatch");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const auto negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw Error(ErrorCode::kSingleClass, "AUC needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 1-based mid-ranks of the positives, doubled to stay integral.
  std::size_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const std::size_t twice_mid_rank = i + 1 + j;  // (i+1) + j over 2
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) twice_rank_sum += twice_mid_rank;
    }
    i = j;
  }
  const std::size_t twice_u = twice_rank_sum - positives * (positives + 1);
  return static_cast<double>(twice_u) * 0.5 / static_cast<double>(positives * negatives);
}

}  // namespace ontaug
