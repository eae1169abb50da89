#include <doctest.h>

#include <cmath>

#include "cinemagraph/errors.hpp"
#include "cinemagraph/inpaint.hpp"
#include "fixtures.hpp"

using namespace cinemagraph;

TEST_CASE("linear fields are reproduced") {
  const int w = 8, h = 6, n = 5;
  std::vector<double> volume(static_cast<std::size_t>(w) * h * n);
  std::vector<CellRole> roles(volume.size(), CellRole::known);
  auto idx = [&](int x, int y, int f) { return (static_cast<std::size_t>(f) * h + y) * w + x; };
  for (int f = 0; f < n; ++f) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool hole = x >= 2 && x <= 5 && y >= 1 && y <= 4 && f >= 1 && f <= 3;
        volume[idx(x, y, f)] = hole ? 0.0 : 3.0 * x - 2.0 * y + 5.0 * f + 10.0;
        if (hole) roles[idx(x, y, f)] = CellRole::unknown;
      }
    }
  }
  InpaintParams params;
  params.tolerance = 1e-9;
  const auto stats = solve_laplace(volume, roles, w, h, n, params);
  CHECK(stats.unknowns == 4 * 4 * 3);
  CHECK(stats.max_update < 1e-9);
  for (int f = 1; f <= 3; ++f) {
    for (int y = 1; y <= 4; ++y) {
      for (int x = 2; x <= 5; ++x) {
        CHECK(volume[idx(x, y, f)] == doctest::Approx(3.0 * x - 2.0 * y + 5.0 * f + 10.0));
      }
    }
  }
}

TEST_CASE("isolated unknown component is an error") {
  std::vector<double> volume(8, 0.0);
  std::vector<CellRole> roles(8, CellRole::ignored);
  roles[0] = CellRole::unknown;
  CHECK_THROWS_AS(solve_laplace(volume, roles, 2, 2, 2), DataError);
}

TEST_CASE("no unknowns is a no-op") {
  std::vector<double> volume(8, 4.0);
  std::vector<CellRole> roles(8, CellRole::known);
  const auto stats = solve_laplace(volume, roles, 2, 2, 2);
  CHECK(stats.unknowns == 0);
  CHECK(volume == std::vector<double>(8, 4.0));
}

TEST_CASE("inpainting fills only invisible region entries") {
  const auto video = fixtures::make_video(10, 10, 6, [](int x, int y, int f) -> Rgb {
    return {std::uint8_t(10 * x), std::uint8_t(10 * y), std::uint8_t(20 * f)};
  });
  VisibilityVolume vis = VisibilityVolume::all_visible(video);
  PixelSet region;
  for (int y = 3; y < 7; ++y) {
    for (int x = 3; x < 7; ++x) region.push_back(static_cast<std::size_t>(y) * 10 + x);
  }
  Image blank = video.frame(2);
  for (int y = 4; y < 6; ++y) {
    for (int x = 4; x < 6; ++x) {
      vis.set(x, y, 2, false);
      blank.set(x, y, {255, 0, 255});
    }
  }
  vis.set(0, 0, 2, false);  // outside the region: untouched
  std::vector<Image> frames = video.frames();
  frames[2] = blank;
  const FrameSequence damaged(frames, video.reference_index());
  InpaintStats stats;
  const auto fixed = inpaint(damaged, vis, region, {}, &stats);
  CHECK(stats.unknowns == 4);
  CHECK(fixed.frame(2).at(4, 4) == video.frame(2).at(4, 4));
  CHECK(fixed.frame(2).at(5, 5) == video.frame(2).at(5, 5));
  CHECK(fixed.frame(2).at(0, 0) == damaged.frame(2).at(0, 0));
  CHECK(fixed.frame(1) == damaged.frame(1));
}

TEST_CASE("a region invisible everywhere cannot be inpainted") {
  const auto video = fixtures::make_video(4, 4, 3, [](int, int, int) { return Rgb{1, 2, 3}; });
  VisibilityVolume vis(4, 4, 3, true);
  const PixelSet region{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  for (int f = 0; f < 3; ++f) {
    for (std::size_t p : region) vis.set(p, f, false);
  }
  CHECK_THROWS_AS(inpaint(video, vis, region), DataError);
}
