// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "ontaug/matrix.hpp"

namespace ontaug {

struct LogisticConfig {
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1e-3;
  double tolerance = 1e-6;  // gradient-norm stopping threshold

  bool operator==(const LogisticConfig&) const = default;
};

/// `weights[0]` is the intercept. An empty weight vector means the training
/// labels were single-class and no model was fit.
struct LogisticModel {
  std::vector<double> weights;
  bool converged = false;
  bool degenerate = false;
  int iterations_run = 0;
  std::vector<double> loss_history;  // loss before each update

  double decision(const double* row) const;
  std::vector<double> decision(const Matrix& x) const;
};

/// Full-batch gradient descent from zero weights on the regularized log-loss.
LogisticModel train_logistic(const Matrix& x, std::span<const int> y, const LogisticConfig& config = {});

/// Mean loss and gradient at `weights` (see kernels::logistic_loss_grad_omp).
double logistic_loss(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                     double l2, std::vector<double>* grad = nullptr);

/// Per-column mean / standard deviation, fit on one matrix and applied to others.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

/// Rank-based (Mann-Whitney) AUC with ties counted half. Throws SingleClass.
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace ontaug
