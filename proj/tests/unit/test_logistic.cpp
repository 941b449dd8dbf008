// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>

#include "ontaug/error.hpp"
#include "ontaug/logistic.hpp"
#include "support.hpp"

using namespace ontaug;

using testsupport::labelled_data;
using testsupport::relative_error;

TEST_CASE("gradient matches central differences") {
  Rng rng(8);
  const testsupport::LabelledMatrix sets[] = {labelled_data(rng, 50, 3, 1.0), labelled_data(rng, 400, 10, 2.0), labelled_data(rng, 700, 5, 0.2)};
  const double l2s[] = {0.0, 1e-3, 0.1};
  for (int s = 0; s < 3; ++s) {
    const auto& data = sets[s];
    for (int point = 0; point < 5; ++point) {
      std::vector<double> w(data.x.cols + 1);
      for (auto& v : w) v = rng.normal() * 0.5;
      std::vector<double> grad;
      logistic_loss(data.x, data.y, w, l2s[s], &grad);
      std::vector<double> fd(w.size());
      const double h = 1e-5;
      for (std::size_t c = 0; c < w.size(); ++c) {
        auto up = w, down = w;
        up[c] += h;
        down[c] -= h;
        fd[c] = (logistic_loss(data.x, data.y, up, l2s[s]) - logistic_loss(data.x, data.y, down, l2s[s])) / (2 * h);
      }
      CHECK(relative_error(grad, fd) < 1e-5);
    }
  }
}

TEST_CASE("loss at zero weights is ln 2") {
  Rng rng(9);
  const auto data = labelled_data(rng, 30, 2, 1.0);
  const std::vector<double> w(3, 0.0);
  CHECK(logistic_loss(data.x, data.y, w, 0.5) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("training lowers the loss and separates classes") {
  Rng rng(10);
  const auto data = labelled_data(rng, 300, 4, 3.0);
  const auto model = train_logistic(data.x, data.y, {0.5, 300, 1e-4, 1e-8});
  REQUIRE(model.weights.size() == 5);
  REQUIRE(model.loss_history.size() >= 2);
  for (std::size_t i = 1; i < model.loss_history.size(); ++i) {
    CHECK(model.loss_history[i] <= model.loss_history[i - 1] + 1e-12);
  }
  CHECK(model.weights[1] > 0.0);
  CHECK(model.weights[4] < 0.0);
  CHECK(auc(model.decision(data.x), data.y) > 0.9);
}

TEST_CASE("tolerance stops early") {
  Rng rng(11);
  const auto data = labelled_data(rng, 100, 2, 1.0);
  const auto model = train_logistic(data.x, data.y, {0.5, 5000, 0.1, 1e-4});
  CHECK(model.converged);
  CHECK(model.iterations_run < 5000);
}

TEST_CASE("single-class training is degenerate") {
  Matrix x(4, 1, 1.0);
  const std::vector<int> y(4, 1);
  const auto model = train_logistic(x, y);
  CHECK(model.degenerate);
  CHECK(model.weights.empty());
}

TEST_CASE("bad inputs") {
  Matrix x(2, 1);
  x(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(train_logistic(x, std::vector<int>{0, 1}), Error);
  CHECK_THROWS_AS(train_logistic(x, std::vector<int>{0}), Error);
}

TEST_CASE("standardizer") {
  Matrix x(3, 2);
  x(0, 0) = 1;
  x(1, 0) = 2;
  x(2, 0) = 3;
  for (std::size_t r = 0; r < 3; ++r) x(r, 1) = 7;
  const auto s = Standardizer::fit(x);
  CHECK(s.mean[0] == doctest::Approx(2.0));
  CHECK(s.scale[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(s.scale[1] == 1.0);
  const auto z = s.apply(x);
  CHECK(z(0, 0) == doctest::Approx(-std::sqrt(1.5)));
  CHECK(z(1, 1) == 0.0);
}

TEST_CASE("AUC fixed cases") {
  CHECK(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<int>{0, 0, 1, 1}) == 0.0);
  CHECK(auc(std::vector<double>{0.5, 0.5, 0.5}, std::vector<int>{0, 1, 1}) == 0.5);
  CHECK(auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}) == 0.75);
  try {
    auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1});
    FAIL("expected SingleClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleClass);
  }
}

TEST_CASE("AUC equals the pairwise oracle exactly") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.uniform_index(299);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::round(rng.uniform() * 20.0) / 20.0;
      y[i] = rng.bernoulli(0.4) ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    CHECK(auc(s, y) == testsupport::auc_pairwise(s, y));
  }
}
