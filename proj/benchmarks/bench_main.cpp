#include <benchmark/benchmark.h>

#include <vector>

#include "snowforge/cleaner.hpp"
#include "snowforge/features.hpp"
#include "snowforge/median.hpp"
#include "snowforge/quality.hpp"
#include "snowforge/rng.hpp"

using namespace snowforge;

namespace {

Frame noise_frame(SplitMix64& rng, Geometry g) {
    Frame f(g);
    for (auto& v : f.samples()) v = static_cast<std::uint8_t>(rng.bounded(256));
    return f;
}

std::vector<Frame> noise_frames(Geometry g, int n) {
    SplitMix64 rng(1);
    std::vector<Frame> out;
    for (int i = 0; i < n; ++i) out.push_back(noise_frame(rng, g));
    return out;
}

void BM_TemporalMedian(benchmark::State& state) {
    const auto frames = noise_frames({256, 256, 3}, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(temporal_median(frames));
    state.SetItemsProcessed(state.iterations() * 256 * 256 * 3 * state.range(0));
}
BENCHMARK(BM_TemporalMedian)->Arg(9)->Arg(15)->Arg(17)->Arg(31)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_DetectKeypoints(benchmark::State& state) {
    SplitMix64 rng(2);
    const Frame f = noise_frame(rng, {550, 600, 3});
    for (auto _ : state) benchmark::DoNotOptimize(detect_keypoints(f));
}
BENCHMARK(BM_DetectKeypoints)->Unit(benchmark::kMillisecond);

void BM_Describe(benchmark::State& state) {
    SplitMix64 rng(3);
    const Frame f = noise_frame(rng, {550, 600, 1});
    const auto kps = detect_keypoints(f);
    for (auto _ : state) benchmark::DoNotOptimize(compute_descriptors(f, kps));
    state.counters["keypoints"] = static_cast<double>(kps.size());
}
BENCHMARK(BM_Describe)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
    SplitMix64 rng(4);
    const Frame a = noise_frame(rng, {550, 600, 3});
    const Frame b = noise_frame(rng, {550, 600, 3});
    for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMillisecond);

void BM_Clean(benchmark::State& state) {
    const FrameSequence seq(noise_frames({224, 224, 3}, 16));
    for (auto _ : state) benchmark::DoNotOptimize(temporal_median_clean(seq));
}
BENCHMARK(BM_Clean)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
