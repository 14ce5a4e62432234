#include "mocap/assignment.hpp"
#include "mocap/rng.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Core>

namespace {

Eigen::MatrixXd random_scores(int points, int labels, std::uint64_t seed) {
  mocap::Rng rng(seed);
  Eigen::MatrixXd scores(points, labels);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < labels; ++j) {
      scores(i, j) = rng.uniform(-3.0, 3.0);
    }
  }
  return scores;
}

void BM_SinkhornNormalize(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const int iterations = static_cast<int>(state.range(1));
  const Eigen::MatrixXd augmented = mocap::augment_scores(random_scores(size, size, 301), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::sinkhorn_normalize(augmented, iterations));
  }
  state.SetItemsProcessed(state.iterations() * size * size * iterations);
}
BENCHMARK(BM_SinkhornNormalize)->Args({22, 20})->Args({54, 20})->Args({54, 100});

void BM_ExtractLabels(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const mocap::ConfidenceMatrix confidence =
      mocap::sinkhorn_normalize(mocap::augment_scores(random_scores(size, size, 302), 0.0), 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::extract_labels(confidence, 0.3));
  }
}
BENCHMARK(BM_ExtractLabels)->Arg(22)->Arg(54);

} // namespace

BENCHMARK_MAIN();
