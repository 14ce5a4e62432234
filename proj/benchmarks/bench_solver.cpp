#include "mocap/kinematics.hpp"
#include "mocap/providers.hpp"
#include "mocap/simulate.hpp"
#include "mocap/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

struct MotionFixture {
  mocap::Skeleton skeleton;
  mocap::Motion motion;
  mocap::PoseEstimate estimate;

  explicit MotionFixture(mocap::SkeletonPreset preset) {
    skeleton = mocap::synth_skeleton(preset);
    motion = mocap::synth_motion(skeleton, 1.0, 60.0, 305);
    const mocap::OraclePoseProvider provider(skeleton, motion, {});
    estimate = provider.estimate(0);
  }
};

const MotionFixture& body22() {
  static const MotionFixture shared(mocap::SkeletonPreset::kBody22);
  return shared;
}

const MotionFixture& fullbody54() {
  static const MotionFixture shared(mocap::SkeletonPreset::kFullBody54);
  return shared;
}

void BM_ForwardKinematics(benchmark::State& state) {
  const MotionFixture& f = state.range(0) == 22 ? body22() : fullbody54();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::forward_kinematics(f.skeleton, f.motion.frames[0]));
  }
}
BENCHMARK(BM_ForwardKinematics)->Arg(22)->Arg(54);

void BM_SolveFrame(benchmark::State& state) {
  const MotionFixture& f = fullbody54();
  const mocap::SolverMode mode =
      state.range(0) == 0 ? mocap::SolverMode::kCorrected : mocap::SolverMode::kNaive;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::solve_frame(f.estimate, f.skeleton, mode));
  }
}
BENCHMARK(BM_SolveFrame)->Arg(0)->Arg(1);

void BM_SolveSequence(benchmark::State& state) {
  const MotionFixture& f = state.range(0) == 22 ? body22() : fullbody54();
  const mocap::OraclePoseProvider provider(f.skeleton, f.motion, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(mocap::solve_sequence(provider, f.skeleton, 0,
                                                   provider.frame_count(),
                                                   mocap::SolverMode::kCorrected,
                                                   f.motion.frame_rate));
  }
  state.SetItemsProcessed(state.iterations() * provider.frame_count());
}
BENCHMARK(BM_SolveSequence)->Arg(22)->Arg(54);

} // namespace

BENCHMARK_MAIN();
