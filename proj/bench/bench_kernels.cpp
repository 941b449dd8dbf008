// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "ontaug/kernels.hpp"
#include "ontaug/rng.hpp"

using namespace ontaug;

namespace {

std::vector<PhenotypeDistribution> distributions(std::size_t n, std::size_t k) {
  Rng rng(17);
  std::vector<PhenotypeDistribution> out(n);
  for (auto& d : out) {
    d.probs.resize(k);
    double total = 0.0;
    for (auto& p : d.probs) total += (p = rng.bernoulli(0.6) ? rng.uniform() : 0.0);
    if (total == 0.0) d.probs[0] = total = 1.0;
    for (auto& p : d.probs) p /= total;
    d.support_count = 10;
  }
  return out;
}

kernels::SmoothedRows rows_for(std::size_t n) {
  static std::vector<PhenotypeDistribution> store;
  store = distributions(n, 12);
  std::vector<const PhenotypeDistribution*> ptrs;
  for (const auto& d : store) ptrs.push_back(&d);
  return kernels::smooth_rows(ptrs, 1e-6);
}

template <Matrix (*F)(const kernels::SmoothedRows&)>
void BM_KlMatrix(benchmark::State& state) {
  const auto rows = rows_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(F(rows));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <std::vector<double> (*F)(const kernels::SmoothedRows&, std::span<const kernels::IndexPair>)>
void BM_KlPairs(benchmark::State& state) {
  const auto rows = rows_for(512);
  Rng rng(5);
  std::vector<kernels::IndexPair> pairs(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pairs) p = {rng.uniform_index(512), rng.uniform_index(512)};
  for (auto _ : state) benchmark::DoNotOptimize(F(rows, pairs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*F)(const Matrix&, std::span<const int>, std::span<const double>, double, std::span<double>)>
void BM_LogisticGrad(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t d = 16;
  Rng rng(9);
  Matrix x(n, d);
  for (auto& v : x.data) v = rng.normal();
  std::vector<int> y(n);
  for (auto& v : y) v = rng.bernoulli(0.3) ? 1 : 0;
  std::vector<double> w(d + 1, 0.1), grad(d + 1);
  for (auto _ : state) benchmark::DoNotOptimize(F(x, y, w, 1e-3, grad));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_KlMatrix<kernels::kl_matrix_serial>)->Name("kl_matrix/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_KlMatrix<kernels::kl_matrix_omp>)->Name("kl_matrix/omp")->Arg(128)->Arg(512);
BENCHMARK(BM_KlPairs<kernels::kl_pairs_serial>)->Name("kl_pairs/serial")->Arg(4096)->Arg(65536);
BENCHMARK(BM_KlPairs<kernels::kl_pairs_omp>)->Name("kl_pairs/omp")->Arg(4096)->Arg(65536);
BENCHMARK(BM_LogisticGrad<kernels::logistic_loss_grad_serial>)->Name("logistic_grad/serial")->Arg(2000)->Arg(40000);
BENCHMARK(BM_LogisticGrad<kernels::logistic_loss_grad_omp>)->Name("logistic_grad/omp")->Arg(2000)->Arg(40000);

BENCHMARK_MAIN();
