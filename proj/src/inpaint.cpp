#include "cinemagraph/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

struct Neighbors {
  std::size_t index[6];
  int count = 0;
};

Neighbors neighbors_of(std::size_t i, int w, int h, int n, std::span<const CellRole> roles) {
  Neighbors out;
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  const int x = static_cast<int>(i % w);
  const int y = static_cast<int>((i / w) % h);
  const int f = static_cast<int>(i / plane);
  auto add = [&](bool inside, std::size_t j) {
    if (inside && roles[j] != CellRole::ignored) out.index[out.count++] = j;
  };
  add(x > 0, i - 1);
  add(x + 1 < w, i + 1);
  add(y > 0, i - w);
  add(y + 1 < h, i + w);
  add(f > 0, i - plane);
  add(f + 1 < n, i + plane);
  return out;
}

}  // namespace

InpaintStats solve_laplace(std::span<double> volume, std::span<const CellRole> roles, int width,
                           int height, int frames, const InpaintParams& params) {
  const std::size_t total = static_cast<std::size_t>(width) * height * frames;
  if (volume.size() != total || roles.size() != total) {
    throw DataError("inpainting volume does not match its dimensions");
  }
  InpaintStats stats;
  std::vector<std::size_t> unknowns;
  for (std::size_t i = 0; i < total; ++i) {
    if (roles[i] == CellRole::unknown) unknowns.push_back(i);
  }
  stats.unknowns = unknowns.size();
  if (unknowns.empty()) return stats;

  // Every unknown component must reach a known entry; seed each component
  // with the mean of the known values it touches.
  std::vector<int> component(total, -1);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t start : unknowns) {
    if (component[start] >= 0) continue;
    std::vector<std::size_t> members;
    double boundary_sum = 0.0;
    std::size_t boundary_count = 0;
    component[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      members.push_back(i);
      const Neighbors nb = neighbors_of(i, width, height, frames, roles);
      for (int k = 0; k < nb.count; ++k) {
        const std::size_t j = nb.index[k];
        if (roles[j] == CellRole::known) {
          boundary_sum += volume[j];
          ++boundary_count;
        } else if (component[j] < 0) {
          component[j] = next;
          stack.push_back(j);
        }
      }
    }
    if (boundary_count == 0) {
      const std::size_t plane = static_cast<std::size_t>(width) * height;
      throw DataError("invisible component " + std::to_string(next) + " of " +
                      std::to_string(members.size()) + " entries starting at (x=" +
                      std::to_string(start % width) + ", y=" +
                      std::to_string((start / width) % height) +
                      ", frame=" + std::to_string(start / plane) +
                      ") has no visible neighbor to fill from");
    }
    const double seed = boundary_sum / static_cast<double>(boundary_count);
    for (std::size_t i : members) volume[i] = seed;
    ++next;
  }

  std::vector<Neighbors> adjacency(unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    adjacency[u] = neighbors_of(unknowns[u], width, height, frames, roles);
  }
  for (stats.sweeps = 1; stats.sweeps <= params.max_sweeps; ++stats.sweeps) {
    double max_update = 0.0;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      const Neighbors& nb = adjacency[u];
      double sum = 0.0;
      for (int k = 0; k < nb.count; ++k) sum += volume[nb.index[k]];
      const double value = sum / nb.count;
      max_update = std::max(max_update, std::abs(value - volume[unknowns[u]]));
      volume[unknowns[u]] = value;
    }
    stats.max_update = max_update;
    if (max_update < params.tolerance) break;
  }
  stats.sweeps = std::min(stats.sweeps, params.max_sweeps);
  return stats;
}

FrameSequence inpaint(const FrameSequence& video, const VisibilityVolume& visibility,
                      const PixelSet& region, const InpaintParams& params, InpaintStats* stats) {
  if (!visibility.matches(video)) throw DataError("visibility volume does not match the video");
  FrameSequence out = video;
  if (region.empty()) return out;
  const int w = video.width(), h = video.height(), n = video.frame_count();

  // Work on the region's bounding box grown by one pixel.
  int x0 = w, y0 = h, x1 = -1, y1 = -1;
  for (std::size_t p : region) {
    const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
  x0 = std::max(x0 - 1, 0);
  y0 = std::max(y0 - 1, 0);
  x1 = std::min(x1 + 1, w - 1);
  y1 = std::min(y1 + 1, h - 1);
  const int bw = x1 - x0 + 1, bh = y1 - y0 + 1;
  const std::size_t plane = static_cast<std::size_t>(bw) * bh;

  std::vector<std::uint8_t> in_region(static_cast<std::size_t>(w) * h, 0);
  for (std::size_t p : region) in_region[p] = 1;
  std::vector<CellRole> roles(plane * n);
  bool any_unknown = false;
  for (int f = 0; f < n; ++f) {
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        const std::size_t i = f * plane + static_cast<std::size_t>(y - y0) * bw + (x - x0);
        if (visibility.visible(p, f)) {
          roles[i] = CellRole::known;
        } else if (in_region[p]) {
          roles[i] = CellRole::unknown;
          any_unknown = true;
        } else {
          roles[i] = CellRole::ignored;
        }
      }
    }
  }
  if (!any_unknown) return out;

  std::vector<double> volume(plane * n);
  for (int c = 0; c < 3; ++c) {
    for (int f = 0; f < n; ++f) {
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          volume[f * plane + static_cast<std::size_t>(y - y0) * bw + (x - x0)] =
              video.frame(f).at(x, y)[c];
        }
      }
    }
    const InpaintStats s = solve_laplace(volume, roles, bw, bh, n, params);
    if (stats && c == 0) *stats = s;
    for (int f = 0; f < n; ++f) {
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t i = f * plane + static_cast<std::size_t>(y - y0) * bw + (x - x0);
          if (roles[i] != CellRole::unknown) continue;
          Rgb color = out.frame(f).at(x, y);
          color[c] = static_cast<std::uint8_t>(std::clamp(std::lround(volume[i]), 0L, 255L));
          out.frame(f).set(x, y, color);
        }
      }
    }
  }
  return out;
}

}  // namespace cinemagraph
