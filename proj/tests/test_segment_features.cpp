#include <doctest.h>

#include "cinemagraph/codebook.hpp"
#include "cinemagraph/errors.hpp"
#include "cinemagraph/segment_features.hpp"
#include "fixtures.hpp"

using namespace cinemagraph;

namespace {

PixelSet rect(int w, int x0, int y0, int x1, int y1) {
  PixelSet s;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) s.push_back(static_cast<std::size_t>(y) * w + x);
  }
  return s;
}

Hog3dCodebook unit_codebook() {
  Hog3dCodebook book;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> c(160, 0.0);
    c[static_cast<std::size_t>(i)] = 1.0;
    book.centers.push_back(c);
  }
  return book;
}

}  // namespace

TEST_CASE("feature layout") {
  CHECK(kFeatureDim == 141);
  CHECK(feature_block::kRgbMean == 0);
  CHECK(feature_block::kRgbVariance == 3);
  CHECK(feature_block::kLabHistogram == 6);
  CHECK(feature_block::kBagOfWords == 30);
  CHECK(feature_block::kAreaRatio == 130);
  CHECK(feature_block::kBoundingBox + 4 == kFeatureDim);
}

TEST_CASE("rectangle shape features") {
  const auto s = shape_features(rect(40, 5, 6, 25, 16), 40, 30);
  CHECK(s.convexity == 1.0);
  CHECK(s.rectangleness == 1.0);
  CHECK(s.edge_count == 4.0);
  CHECK(s.aspect_ratio == doctest::Approx(2.0));
  CHECK(s.area_ratio == doctest::Approx(200.0 / 1200.0));
  CHECK(s.centroid[0] == doctest::Approx(15.0 / 40.0));
  CHECK(s.centroid[1] == doctest::Approx(11.0 / 30.0));
  CHECK(s.bbox[0] == doctest::Approx(5.0 / 40.0));
  CHECK(s.bbox[3] == doctest::Approx(16.0 / 30.0));
}

TEST_CASE("full frame shape features") {
  const auto s = shape_features(rect(20, 0, 0, 20, 10), 20, 10);
  CHECK(s.area_ratio == 1.0);
  CHECK(s.bbox == std::array<double, 4>{0.0, 0.0, 1.0, 1.0});
  CHECK(s.edge_count == 4.0);
}

TEST_CASE("L shape is not convex or rectangular") {
  // 200x200 frame: the 2 px tolerance absorbs the contour's diagonal step at
  // the inner corner.
  PixelSet l = rect(200, 0, 0, 100, 20);
  const auto stem = rect(200, 0, 20, 20, 100);
  l.insert(l.end(), stem.begin(), stem.end());
  std::sort(l.begin(), l.end());
  const auto s = shape_features(l, 200, 200);
  CHECK(s.convexity < 1.0);
  CHECK(s.rectangleness == doctest::Approx(36.0 / 100.0));
  CHECK(s.edge_count == 6.0);
  // At 1% of a 20 px frame the inner corner's diagonal survives as an edge.
  PixelSet small = rect(20, 0, 0, 10, 2);
  const auto small_stem = rect(20, 0, 2, 2, 10);
  small.insert(small.end(), small_stem.begin(), small_stem.end());
  std::sort(small.begin(), small.end());
  CHECK(shape_features(small, 20, 20).edge_count == 7.0);
}

TEST_CASE("full feature vector on a synthetic clip") {
  const auto clip = fixtures::display_clip(2, 48, 48, 16, 16, 16, 16, 0, 0, 8);
  const auto vis = VisibilityVolume::all_visible(clip.video);
  const auto book = unit_codebook();
  const FeatureContext ctx(clip.video, vis, book);
  CHECK_FALSE(ctx.grid_words().empty());
  const auto display = rect(48, 16, 16, 32, 32);
  const auto f = extract_features(display, ctx);
  double lab_sum = 0.0;
  for (int i = 0; i < 24; ++i) lab_sum += f[feature_block::kLabHistogram + i];
  CHECK(lab_sum == doctest::Approx(3.0));
  double bow = 0.0;
  for (int i = 0; i < 100; ++i) bow += f[feature_block::kBagOfWords + i];
  CHECK(bow == doctest::Approx(1.0));
  CHECK(f[feature_block::kRgbVariance] > 0.0);
  CHECK(f[feature_block::kRectangleness] == 1.0);

  const auto still = extract_features(rect(48, 40, 0, 41, 1), ctx);  // one static pixel
  CHECK(still[feature_block::kRgbVariance] == 0.0);

  CHECK(extract_features(display, clip.video, vis, book) == f);
  const std::vector<PixelSet> segs{display, rect(48, 40, 0, 48, 4)};
  const auto batch = extract_features_batch(segs, ctx);
  CHECK(batch[0] == f);
  CHECK(batch == extract_features_batch(segs, ctx, Execution::serial));
  CHECK_THROWS_AS(extract_features({}, ctx), DataError);
}

TEST_CASE("feature context rejects a wrong codebook") {
  const auto clip = fixtures::display_clip(2, 32, 32, 8, 8, 8, 16, 0, 0, 4);
  const auto vis = VisibilityVolume::all_visible(clip.video);
  Hog3dCodebook small = unit_codebook();
  small.centers.resize(50);
  CHECK_THROWS_AS(FeatureContext(clip.video, vis, small), DataError);
}
