#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cinemagraph/codebook.hpp"
#include "cinemagraph/errors.hpp"
#include "cinemagraph/hog3d.hpp"
#include "cinemagraph/rng.hpp"
#include "fixtures.hpp"

using namespace cinemagraph;

TEST_CASE("orientation bins are unit vectors with the dodecahedral geometry") {
  const auto& n = icosahedron_normals();
  for (const auto& v : n) {
    CHECK(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) == doctest::Approx(1.0));
  }
  // Each axis has exactly three nearest neighbors at the same angle.
  for (std::size_t i = 0; i < n.size(); ++i) {
    double best = -2.0;
    int count = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
      if (i == j) continue;
      const double dot = n[i][0] * n[j][0] + n[i][1] * n[j][1] + n[i][2] * n[j][2];
      if (dot > best + 1e-9) {
        best = dot;
        count = 1;
      } else if (std::abs(dot - best) <= 1e-9) {
        ++count;
      }
    }
    CHECK(count == 3);
    CHECK(best == doctest::Approx(std::sqrt(5.0) / 3.0));
  }
}

TEST_CASE("a pure x ramp splits its magnitude over the winning bin pair") {
  std::vector<double> bins(Hog3dLayout::kBins, 0.0);
  vote_orientation(2.0, 0.0, 0.0, bins);
  int nonzero = 0;
  for (double b : bins) {
    if (b != 0.0) {
      ++nonzero;
      CHECK(b == doctest::Approx(1.0));
    }
  }
  CHECK(nonzero == 2);
  CHECK(std::accumulate(bins.begin(), bins.end(), 0.0) == doctest::Approx(2.0));
}

TEST_CASE("a generic gradient votes into one bin") {
  std::vector<double> bins(Hog3dLayout::kBins, 0.0);
  const auto& n = icosahedron_normals();
  vote_orientation(3 * n[5][0] + 0.01, 3 * n[5][1], 3 * n[5][2], bins);
  CHECK(bins[5] > 2.9);
  CHECK(std::accumulate(bins.begin(), bins.end(), 0.0) == doctest::Approx(bins[5]));
  std::vector<double> zero(Hog3dLayout::kBins, 0.0);
  vote_orientation(0, 0, 0, zero);
  CHECK(std::accumulate(zero.begin(), zero.end(), 0.0) == 0.0);
}

TEST_CASE("descriptor grid, dimension and normalization") {
  const auto clip = fixtures::display_clip(1, 40, 32, 16);
  const auto d = hog3d_descriptors(clip.video);
  // x0 in {0,8,16,24}, y0 in {0,8,16}, t0 in {0,4,8}
  CHECK(d.size() == 4 * 3 * 3);
  CHECK(d.front().values.size() == 160);
  CHECK(d.front().x == 8);
  CHECK(d.front().t == 4);
  for (const auto& desc : d) {
    double norm = 0.0;
    for (double v : desc.values) norm += v * v;
    CHECK((norm == doctest::Approx(1.0) || norm == 0.0));
  }
  const auto tiny = fixtures::make_video(8, 8, 4, [](int, int, int) { return Rgb{}; });
  CHECK_THROWS_AS(hog3d_descriptors(tiny), DataError);
}

TEST_CASE("k-means separates well-separated clusters") {
  Rng rng(3);
  std::vector<std::vector<double>> pts;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 30; ++i) {
      pts.push_back({10.0 * c + 0.1 * rng.normal(), -5.0 * c + 0.1 * rng.normal()});
    }
  }
  const auto book = train_codebook(pts, {4, 100, 9}, {});
  CHECK(book.size() == 4);
  for (int c = 0; c < 4; ++c) {
    const int word = book.assign(pts[c * 30]);
    for (int i = 0; i < 30; ++i) CHECK(book.assign(pts[c * 30 + i]) == word);
  }
  for (std::size_t i = 1; i < book.objective_trace.size(); ++i) {
    CHECK(book.objective_trace[i] <= book.objective_trace[i - 1] + 1e-9);
  }
  const auto again = train_codebook(pts, {4, 100, 9}, {});
  CHECK(codebook_to_string(again) == codebook_to_string(book));
  const auto serial = train_codebook(pts, {4, 100, 9}, {}, Execution::serial);
  CHECK(codebook_to_string(serial) == codebook_to_string(book));
}

TEST_CASE("codebook round trip and errors") {
  std::vector<std::vector<double>> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  const auto book = train_codebook(pts, {3, 10, 1}, {});
  const auto loaded = codebook_from_string(codebook_to_string(book));
  CHECK(loaded.centers == book.centers);
  CHECK(loaded.seed == book.seed);
  const auto dir = fixtures::temp_dir("codebook");
  save_codebook(dir / "book.json", book);
  CHECK(load_codebook(dir / "book.json").centers == book.centers);
  std::vector<std::vector<double>> dup{{1, 1}, {1, 1}, {2, 2}};
  CHECK_THROWS_AS(train_codebook(dup, {3, 10, 1}, {}), DataError);
  CHECK_THROWS_AS(codebook_from_string("{not json"), DataError);
  CHECK_THROWS_AS(load_codebook(dir / "missing.json"), DataError);
}
