#include "mocap/simulate.hpp"
#include "mocap/tracklet.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

/// One labeling window of realistic size: 30 corrupted body22 frames.
struct WindowFixture {
  std::vector<mocap::FramePointCloud> frames;
  mocap::FeatureSet features;
  mocap::GraphParams params;

  WindowFixture() {
    mocap::NoiseConfig noise;
    noise.occlusion_body = 0.05;
    noise.ghost_rate = 0.5;
    noise.shuffle = true;
    noise.seed = 304;
    const mocap::SimulationResult sim =
        mocap::simulate_sequence(mocap::SkeletonPreset::kBody22, 0.5, 60.0, 303, noise);
    frames = sim.frames;
    features = mocap::baseline_features(frames);
    params.th_pos = 0.1;
  }
};

const WindowFixture& fixture() {
  static const WindowFixture shared;
  return shared;
}

void BM_BaselineFeatures(benchmark::State& state) {
  const WindowFixture& w = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::baseline_features(w.frames));
  }
}
BENCHMARK(BM_BaselineFeatures);

void BM_BuildGraph(benchmark::State& state) {
  const WindowFixture& w = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::build_graph(w.frames, w.features.per_frame, w.params));
  }
}
BENCHMARK(BM_BuildGraph);

void BM_GreedyCluster(benchmark::State& state) {
  const WindowFixture& w = fixture();
  const mocap::MarkerGraph graph = mocap::build_graph(w.frames, w.features.per_frame, w.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::greedy_cluster(graph));
  }
  state.SetLabel(std::to_string(graph.edges.size()) + " edges");
}
BENCHMARK(BM_GreedyCluster);

} // namespace

BENCHMARK_MAIN();
