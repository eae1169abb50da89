#include "cinemagraph/hog3d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "cinemagraph/color.hpp"
#include "cinemagraph/errors.hpp"

namespace cinemagraph {

const std::array<std::array<double, 3>, Hog3dLayout::kBins>& icosahedron_normals() {
  static const auto normals = [] {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double inv = 1.0 / phi;
    std::array<std::array<double, 3>, Hog3dLayout::kBins> n{};
    int k = 0;
    for (int sx : {-1, 1}) {
      for (int sy : {-1, 1}) {
        for (int sz : {-1, 1}) n[k++] = {double(sx), double(sy), double(sz)};
      }
    }
    for (int s1 : {-1, 1}) {
      for (int s2 : {-1, 1}) {
        n[k++] = {0.0, s1 * inv, s2 * phi};
        n[k++] = {s1 * inv, s2 * phi, 0.0};
        n[k++] = {s1 * phi, 0.0, s2 * inv};
      }
    }
    const double norm = std::sqrt(3.0);
    for (auto& v : n) {
      for (auto& c : v) c /= norm;
    }
    return n;
  }();
  return normals;
}

void vote_orientation(double gx, double gy, double gt, std::span<double> bins) {
  const double magnitude = std::sqrt(gx * gx + gy * gy + gt * gt);
  if (magnitude == 0.0) return;
  const auto& normals = icosahedron_normals();
  std::array<double, Hog3dLayout::kBins> proj{};
  double best = -1e300;
  for (int i = 0; i < Hog3dLayout::kBins; ++i) {
    proj[i] = normals[i][0] * gx + normals[i][1] * gy + normals[i][2] * gt;
    best = std::max(best, proj[i]);
  }
  const double eps = 1e-12 * magnitude;
  int winners = 0;
  for (double p : proj) winners += (best - p <= eps) ? 1 : 0;
  const double share = magnitude / winners;
  for (int i = 0; i < Hog3dLayout::kBins; ++i) {
    if (best - proj[i] <= eps) bins[i] += share;
  }
}

namespace {

class LumaVolume {
 public:
  explicit LumaVolume(const FrameSequence& video)
      : w_(video.width()), h_(video.height()), n_(video.frame_count()),
        data_(video.pixel_count() * static_cast<std::size_t>(n_)) {
    for (int f = 0; f < n_; ++f) {
      const Image& img = video.frame(f);
      for (std::size_t p = 0; p < video.pixel_count(); ++p) {
        data_[static_cast<std::size_t>(f) * video.pixel_count() + p] = luma(img.at(p));
      }
    }
  }

  double at(int x, int y, int t) const {
    return data_[(static_cast<std::size_t>(t) * h_ + y) * w_ + x];
  }

  // Central differences, one-sided at the volume border.
  std::array<double, 3> gradient(int x, int y, int t) const {
    auto diff = [&](int lo_x, int lo_y, int lo_t, int hi_x, int hi_y, int hi_t, int span) {
      return (at(hi_x, hi_y, hi_t) - at(lo_x, lo_y, lo_t)) / span;
    };
    const int x0 = std::max(x - 1, 0), x1 = std::min(x + 1, w_ - 1);
    const int y0 = std::max(y - 1, 0), y1 = std::min(y + 1, h_ - 1);
    const int t0 = std::max(t - 1, 0), t1 = std::min(t + 1, n_ - 1);
    return {x1 > x0 ? diff(x0, y, t, x1, y, t, x1 - x0) : 0.0,
            y1 > y0 ? diff(x, y0, t, x, y1, t, y1 - y0) : 0.0,
            t1 > t0 ? diff(x, y, t0, x, y, t1, t1 - t0) : 0.0};
  }

 private:
  int w_, h_, n_;
  std::vector<std::uint8_t> data_;
};

struct GridPoint {
  int x0, y0, t0;
};

std::vector<double> describe(const LumaVolume& volume, const Hog3dLayout& layout,
                             const GridPoint& g) {
  std::vector<double> values(static_cast<std::size_t>(layout.dimension()), 0.0);
  const int cell_xy = layout.window_xy / layout.cells_xy;
  const int cell_t = layout.window_t / layout.cells_t;
  for (int dt = 0; dt < layout.window_t; ++dt) {
    for (int dy = 0; dy < layout.window_xy; ++dy) {
      for (int dx = 0; dx < layout.window_xy; ++dx) {
        const auto grad = volume.gradient(g.x0 + dx, g.y0 + dy, g.t0 + dt);
        const int cell = ((dt / cell_t) * layout.cells_xy + dy / cell_xy) * layout.cells_xy +
                         dx / cell_xy;
        vote_orientation(grad[0], grad[1], grad[2],
                         std::span<double>(values).subspan(
                             static_cast<std::size_t>(cell) * Hog3dLayout::kBins,
                             Hog3dLayout::kBins));
      }
    }
  }
  double norm = 0.0;
  for (double v : values) norm += v * v;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& v : values) v /= norm;
  }
  return values;
}

}  // namespace

std::vector<Hog3dDescriptor> hog3d_descriptors(const FrameSequence& video,
                                               const Hog3dLayout& layout, Execution exec) {
  if (layout.window_xy % layout.cells_xy != 0 || layout.window_t % layout.cells_t != 0 ||
      layout.stride_xy <= 0 || layout.stride_t <= 0) {
    throw UsageError("HoG3D window must divide evenly into cells and strides be positive");
  }
  if (video.width() < layout.window_xy || video.height() < layout.window_xy ||
      video.frame_count() < layout.window_t) {
    throw DataError("video is smaller than one HoG3D support window (" +
                    std::to_string(layout.window_xy) + "x" + std::to_string(layout.window_xy) +
                    "x" + std::to_string(layout.window_t) + ")");
  }
  const LumaVolume volume(video);
  std::vector<GridPoint> grid;
  for (int t0 = 0; t0 + layout.window_t <= video.frame_count(); t0 += layout.stride_t) {
    for (int y0 = 0; y0 + layout.window_xy <= video.height(); y0 += layout.stride_xy) {
      for (int x0 = 0; x0 + layout.window_xy <= video.width(); x0 += layout.stride_xy) {
        grid.push_back({x0, y0, t0});
      }
    }
  }
  std::vector<Hog3dDescriptor> out(grid.size());
  auto body = [&](std::int64_t i) {
    const GridPoint& g = grid[static_cast<std::size_t>(i)];
    out[i] = {g.x0 + layout.window_xy / 2, g.y0 + layout.window_xy / 2, g.t0 + layout.window_t / 2,
              describe(volume, layout, g)};
  };
  const auto n = static_cast<std::int64_t>(grid.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  return out;
}

}  // namespace cinemagraph
