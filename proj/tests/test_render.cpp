#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "cinemagraph/errors.hpp"
#include "cinemagraph/render.hpp"
#include "cinemagraph/rng.hpp"
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

FrameSequence noisy(int w, int h, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Rgb> colors(static_cast<std::size_t>(w) * h * n);
  for (auto& c : colors) {
    c = {std::uint8_t(rng.index(256)), std::uint8_t(rng.index(256)), std::uint8_t(rng.index(256))};
  }
  return fixtures::make_video(w, h, n, [&](int x, int y, int f) {
    return colors[(static_cast<std::size_t>(f) * h + y) * w + x];
  });
}

}  // namespace

TEST_CASE("adaptive lambda") {
  CHECK(adaptive_lambda(0.0) == 0.005);
  CHECK(adaptive_lambda(0.4) == 0.011);
  CHECK(adaptive_lambda(1.0) == 0.02);
  CHECK_THROWS_AS(adaptive_lambda(-0.01), UsageError);
  CHECK_THROWS_AS(adaptive_lambda(1.01), UsageError);
}

TEST_CASE("ping-pong indexing") {
  const std::vector<int> expected{0, 1, 2, 3, 4, 3, 2, 1};
  for (int t = 0; t < 8; ++t) CHECK(ping_pong_source(t, 5) == expected[t]);
  CHECK(loop_length(5) == 8);
  CHECK(ping_pong_source(8, 5) == ping_pong_source(0, 5));
  CHECK(ping_pong_source(4, 5) == 4);
  CHECK(ping_pong_source(1, 2) == 1);
}

TEST_CASE("tiling indexing") {
  const FrameInterval iv{10, 70};
  for (int t = 0; t < 300; ++t) CHECK(tiled_source(t, iv) == 10 + t % 61);
}

TEST_CASE("feather ramp") {
  Mask m(9, 9, 0);
  for (int y = 1; y < 8; ++y) {
    for (int x = 1; x < 8; ++x) m(x, y) = 1;
  }
  const auto a = feather_alpha(m, 2);
  CHECK(a(0, 0) == 0.0);
  CHECK(a(1, 4) == doctest::Approx(1.0 / 3.0));
  CHECK(a(2, 4) == doctest::Approx(2.0 / 3.0));
  CHECK(a(3, 4) == 1.0);
  CHECK(a(4, 4) == 1.0);
  const auto hard = feather_alpha(m, 0);
  CHECK(hard(1, 4) == 1.0);
  const Mask full(3, 3, 1);
  CHECK(feather_alpha(full, 2)(0, 0) == 1.0);
}

TEST_CASE("loop invariants") {
  const int w = 20, h = 16, n = 12;
  const auto video = noisy(w, h, n, 1);
  const PixelSet display = rect(w, 2, 2, 10, 10);
  std::vector<RegionVideo> regions{extract_region_video(video, display)};
  Mask rep(w, h, 0);
  Grid<FrameInterval> intervals(w, h, FrameInterval{0, n - 1});
  for (int y = 2; y < 6; ++y) {
    for (int x = 14; x < 18; ++x) {
      rep(x, y) = 1;
      intervals(x, y) = {3, 8};
    }
  }
  RenderInputs in;
  in.source = &video;
  in.display_regions = regions;
  in.repetitive_mask = &rep;
  in.repetitive_intervals = &intervals;
  const auto loop = render_loop(in);
  REQUIRE(loop.frame_count() == 2 * (n - 1));
  const Image& ref = video.reference();

  for (int k = 0; k < loop.frame_count(); ++k) {
    const int mirror = (2 * (n - 1) - k) % loop.frame_count();
    for (std::size_t p : display) CHECK(loop.frame(k).at(p) == loop.frame(mirror).at(p));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool in_display = x >= 2 && x < 10 && y >= 2 && y < 10;
        if (rep(x, y)) {
          CHECK(loop.frame(k).at(x, y) == video.frame(3 + k % 6).at(x, y));
        } else if (!in_display) {
          CHECK(loop.frame(k).at(x, y) == ref.at(x, y));
        }
      }
    }
    // Interior display pixels (past the ramp) play the source forward and back.
    CHECK(loop.frame(k).at(6, 6) == video.frame(ping_pong_source(k, n)).at(6, 6));
  }
}

TEST_CASE("display wins over repetitive") {
  const auto video = noisy(8, 8, 6, 2);
  const PixelSet display = rect(8, 0, 0, 8, 8);
  std::vector<RegionVideo> regions{extract_region_video(video, display)};
  Mask rep(8, 8, 1);
  Grid<FrameInterval> intervals(8, 8, FrameInterval{1, 4});
  RenderInputs in;
  in.source = &video;
  in.display_regions = regions;
  in.repetitive_mask = &rep;
  in.repetitive_intervals = &intervals;
  const auto loop = render_loop(in);
  CHECK(loop.frame(7).at(3, 3) == video.frame(3).at(3, 3));
}

TEST_CASE("regularization uses the segment richness") {
  const int n = 32;
  // Segment A flickers black/white every 4 frames (gamma = 1); B is static.
  const auto video = fixtures::make_video(8, 4, n, [](int x, int y, int f) -> Rgb {
    if (x < 4) {
      const std::uint8_t v = static_cast<std::uint8_t>((f / 4) % 2 ? 250 : 5 + x + y);
      return {v, v, v};
    }
    return {100, std::uint8_t(100 + x), std::uint8_t(90 + y)};
  });
  const auto a = regularize_segment(video, rect(8, 0, 0, 4, 4));
  CHECK(a.gamma == 1.0);
  CHECK(a.lambda == 0.02);
  CHECK(a.video.colors.size() == 16u * n);
  const auto b = regularize_segment(video, rect(8, 4, 0, 8, 4));
  CHECK(b.gamma == 0.0);
  CHECK(b.lambda == 0.005);
  CHECK_THROWS_AS(regularize_segment(video, {}), DataError);
}

TEST_CASE("regularization removes a transient glitch") {
  // Large enough that lambda = 0.02 exceeds 1/sqrt(frames * pixels).
  const int n = 48;
  const auto video = fixtures::make_video(30, 30, n, [](int x, int y, int f) -> Rgb {
    if (f == 17 && x == 2 && y == 3) return {255, 255, 255};
    const auto v = static_cast<std::uint8_t>(30 + x + y + ((f / 4) % 2) * 150);
    return {v, std::uint8_t(v / 2), 20};
  });
  const auto r = regularize_segment(video, rect(30, 0, 0, 30, 30));
  CHECK(r.gamma == 1.0);
  const std::size_t glitch = 3 * 30 + 2;
  CHECK(r.video.at(17, glitch) == video.frame(16).at(glitch));
  int worst = 0;
  for (int f = 0; f < n; ++f) {
    for (std::size_t k = 0; k < 900; ++k) {
      if (f == 17 && k == glitch) continue;
      for (int c = 0; c < 3; ++c) {
        worst = std::max(worst, std::abs(int(r.video.at(f, k)[c]) - int(video.frame(f).at(k)[c])));
      }
    }
  }
  CHECK(worst <= 1);
}

TEST_CASE("small segments collapse into the sparse part") {
  // With lambda below 1/sqrt(frames * pixels) the zero low-rank part is optimal.
  const auto video = fixtures::flicker_static(6, 6, 16, 4);
  const auto r = regularize_segment(video, rect(6, 3, 0, 6, 6));
  CHECK(r.lambda == 0.005);
  for (const Rgb& c : r.video.colors) CHECK(c == Rgb{0, 0, 0});
}

TEST_CASE("render input validation") {
  const auto video = noisy(4, 4, 3, 3);
  RenderInputs in;
  CHECK_THROWS_AS(render_loop(in), UsageError);
  in.source = &video;
  Mask rep(5, 4, 0);
  Grid<FrameInterval> iv(5, 4);
  in.repetitive_mask = &rep;
  in.repetitive_intervals = &iv;
  CHECK_THROWS_AS(render_loop(in), DataError);
}
