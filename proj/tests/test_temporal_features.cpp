#include <doctest.h>

#include "cinemagraph/color.hpp"
#include "cinemagraph/errors.hpp"
#include "cinemagraph/rng.hpp"
#include "cinemagraph/temporal_features.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cinemagraph;

namespace {

std::vector<RgbF> constant_series(int n, RgbF c) { return std::vector<RgbF>(n, c); }

std::vector<RgbF> random_series(Rng& rng, int n) {
  std::vector<RgbF> s(n);
  for (auto& c : s) c = {double(rng.index(256)), double(rng.index(256)), double(rng.index(256))};
  return s;
}

}  // namespace

TEST_CASE("pattern lengths for a 300-frame video") {
  CHECK(pattern_length(300, 4, 4) == 74);
  CHECK(pattern_length(300, 2, 150) == 75);
  const auto d = full_descriptor(constant_series(300, {1, 2, 3}));
  CHECK(d.len1 == 74);
  CHECK(d.len2 == 75);
  CHECK(d.bits.size() == 149);
}

TEST_CASE("pattern length matches enumeration") {
  for (int n = 1; n <= 120; ++n) {
    for (int alpha = 1; alpha <= 5; ++alpha) {
      for (int beta = 1; beta <= n + 2; beta += 3) {
        CHECK(pattern_length(n, alpha, beta) == oracle::pattern_indices(n, alpha, beta).size());
      }
    }
  }
}

TEST_CASE("threshold is strict") {
  std::vector<RgbF> s(12, RgbF{0, 0, 0});
  for (int f = 4; f < 12; ++f) s[f] = {100, 0, 0};
  auto bits = binary_pattern(s, 4, 4, 100.0);
  CHECK(bits.size() == 2);
  CHECK_FALSE(bits[0]);
  for (int f = 4; f < 12; ++f) s[f] = {100.0001, 0, 0};
  bits = binary_pattern(s, 4, 4, 100.0);
  CHECK(bits[0]);
  CHECK_FALSE(bits[1]);
}

TEST_CASE("descriptor bits agree with the direct definition") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 9 + static_cast<int>(rng.index(80));
    const auto s = random_series(rng, n);
    const auto d = full_descriptor(s);
    const auto b1 = oracle::change_bits(s, 4, 4, 100.0);
    const auto b2 = oracle::change_bits(s, 2, n / 2, 100.0);
    REQUIRE(d.len1 == b1.size());
    REQUIRE(d.len2 == b2.size());
    for (std::size_t i = 0; i < b1.size(); ++i) CHECK(d.bits[i] == b1[i]);
    for (std::size_t i = 0; i < b2.size(); ++i) CHECK(d.bits[d.len1 + i] == b2[i]);
  }
}

TEST_CASE("constant pixel has an all-zero descriptor and zero richness") {
  const auto d = full_descriptor(constant_series(64, {200, 10, 30}));
  CHECK(d.bits.count() == 0);
  CHECK(richness(d) == 0.0);
}

TEST_CASE("richness counts the short-range block only") {
  std::vector<RgbF> s(16);
  for (int f = 0; f < 16; ++f) s[f] = (f / 4) % 2 ? RgbF{255, 255, 255} : RgbF{0, 0, 0};
  const auto d = full_descriptor(s);
  CHECK(d.len1 == 3);
  CHECK(richness(d) == 1.0);
}

TEST_CASE("pattern distance is a normalized Hamming distance") {
  Rng rng(5);
  const auto a = full_descriptor(random_series(rng, 40));
  const auto b = full_descriptor(random_series(rng, 40));
  const auto c = full_descriptor(random_series(rng, 40));
  CHECK(pattern_distance(a, a) == 0.0);
  CHECK(pattern_distance(a, b) == pattern_distance(b, a));
  CHECK(pattern_distance(a, c) <= pattern_distance(a, b) + pattern_distance(b, c) + 1e-15);
  CHECK(pattern_distance(a, b) >= 0.0);
  CHECK(pattern_distance(a, b) <= 1.0);
  const auto short_one = full_descriptor(random_series(rng, 30));
  CHECK_THROWS_AS(pattern_distance(a, short_one), DataError);
}

TEST_CASE("series too short for the lookahead is rejected") {
  CHECK_THROWS_AS(binary_pattern(constant_series(4, {0, 0, 0}), 4, 4, 100.0), DataError);
}

TEST_CASE("appearance distance") {
  const auto video = fixtures::make_video(4, 1, 3, [](int x, int, int) -> Rgb {
    return x < 2 ? Rgb{255, 0, 0} : Rgb{0, 0, 255};
  });
  const auto vis = VisibilityVolume::all_visible(video);
  const auto red = appearance_histogram({0, 1}, video, vis);
  const auto blue = appearance_histogram({2, 3}, video, vis);
  CHECK(red.total() == 6.0);
  CHECK(appearance_distance(red, red) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(appearance_distance(red, blue) > 0.5);
  CHECK(appearance_distance(red, blue) == doctest::Approx(appearance_distance(blue, red)));
  CHECK_THROWS_AS(appearance_histogram({}, video, vis), DataError);
  const VisibilityVolume hidden(4, 1, 3, false);
  CHECK_THROWS_AS(appearance_histogram({0}, video, hidden), DataError);
  CHECK(accumulate_histogram({0}, video, hidden).total() == 0.0);
  CHECK_THROWS_AS(appearance_distance(LabHistogram{}, red), DataError);

  const LabBinCache cache(video);
  CHECK(appearance_histogram({0, 1}, cache, vis) == red);
}

TEST_CASE("lab bins clamp to the ends") {
  CHECK(lab_bin(-5.0, 0.0, 100.0) == 0);
  CHECK(lab_bin(0.0, 0.0, 100.0) == 0);
  CHECK(lab_bin(12.5, 0.0, 100.0) == 1);
  CHECK(lab_bin(100.0, 0.0, 100.0) == 7);
  CHECK(lab_bin(130.0, -128.0, 128.0) == 7);
}

TEST_CASE("color conversion reference values") {
  const auto white = rgb_to_lab(255, 255, 255);
  CHECK(white.L == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(white.a == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(white.b == doctest::Approx(0.0).epsilon(1e-6));
  const auto red = rgb_to_lab(255, 0, 0);
  CHECK(red.L == doctest::Approx(53.24).epsilon(2e-3));
  CHECK(red.a == doctest::Approx(80.09).epsilon(2e-3));
  CHECK(red.b == doctest::Approx(67.20).epsilon(2e-3));
  CHECK(luma(255, 255, 255) == 255);
  CHECK(luma(0, 0, 0) == 0);
  CHECK(luma(255, 0, 0) == 76);
  for (int v = 0; v < 256; v += 17) {
    const Rgb c{std::uint8_t(v), std::uint8_t(255 - v), std::uint8_t(v / 2)};
    CHECK(lab_to_rgb(rgb_to_lab(c)) == c);
  }
}

TEST_CASE("invisible frames take the nearest visible value, earlier on ties") {
  const std::vector<double> s{1, 2, 3, 4, 5};
  const std::vector<std::uint8_t> vis{1, 0, 0, 0, 1};
  const auto filled = fill_invisible<double>(s, vis);
  CHECK(filled == std::vector<double>{1, 1, 1, 5, 5});
  const std::vector<std::uint8_t> none{0, 0, 0, 0, 0};
  CHECK(fill_invisible<double>(s, none) == s);
}
