// Serial reference paths against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "cinemagraph/codebook.hpp"
#include "cinemagraph/display_classifier.hpp"
#include "cinemagraph/hog3d.hpp"
#include "cinemagraph/random_forest.hpp"
#include "cinemagraph/repetitive.hpp"
#include "cinemagraph/rng.hpp"
#include "cinemagraph/segment_features.hpp"
#include "cinemagraph/segmentation.hpp"
#include "fixtures.hpp"

using namespace cinemagraph;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

const fixtures::Clip& clip() {
  static const auto c = fixtures::display_clip(3);
  return c;
}

const VisibilityVolume& visibility() {
  static const auto v = VisibilityVolume::all_visible(clip().video);
  return v;
}

const Hog3dCodebook& codebook() {
  static const Hog3dCodebook book = [] {
    std::vector<std::vector<double>> points;
    for (auto& d : hog3d_descriptors(clip().video, {})) points.push_back(std::move(d.values));
    return train_codebook(points, {100, 20, 1});
  }();
  return book;
}

void BM_Segment(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(segment(clip().video, visibility(), {}, mode(state)));
  }
}

void BM_RepetitiveMask(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(repetitive_mask(clip().video, visibility(), {}, mode(state)));
  }
}

void BM_Hog3d(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hog3d_descriptors(clip().video, {}, mode(state)));
}

void BM_FeatureBatch(benchmark::State& state) {
  static const auto hierarchy = segment(clip().video, visibility());
  static const std::vector<double> levels{60, 70, 80};
  static const auto segments = level_segments(hierarchy, levels);
  const FeatureContext ctx(clip().video, visibility(), codebook(), mode(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_features_batch(segments, ctx, mode(state)));
  }
}

void BM_ForestTraining(benchmark::State& state) {
  Rng rng(5);
  std::vector<std::vector<double>> x;
  std::vector<std::uint8_t> y;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> row(141);
    for (auto& v : row) v = rng.normal();
    y.push_back(row[0] + row[7] > 0 ? 1 : 0);
    x.push_back(std::move(row));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_forest(x, y, {100, 10, 2, 0, 1}, 1, mode(state)));
  }
}

}  // namespace

// Argument 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_Segment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RepetitiveMask)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hog3d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeatureBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestTraining)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
