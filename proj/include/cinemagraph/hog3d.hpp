#pragma once

#include <array>
#include <span>
#include <vector>

#include "cinemagraph/image.hpp"
#include "cinemagraph/parallel.hpp"

namespace cinemagraph {

/// Spatio-temporal gradient histogram layout: a window_xy^2 x window_t
/// support split into cells_xy^2 x cells_t cells, 20 orientation bins each.
struct Hog3dLayout {
  int window_xy = 16;
  int window_t = 8;
  int cells_xy = 2;
  int cells_t = 2;
  int stride_xy = 8;
  int stride_t = 4;
  static constexpr int kBins = 20;

  int dimension() const { return cells_xy * cells_xy * cells_t * kBins; }
  friend bool operator==(const Hog3dLayout&, const Hog3dLayout&) = default;
};

struct Hog3dDescriptor {
  int x = 0;  // support window center (grid point)
  int y = 0;
  int t = 0;
  std::vector<double> values;
};

/// Unit face normals of a regular icosahedron (the vertices of the dual
/// dodecahedron), used as orientation bin axes.
const std::array<std::array<double, 3>, Hog3dLayout::kBins>& icosahedron_normals();

/// Adds the gradient magnitude to the orientation bin(s) with maximal
/// projection; exact ties share the magnitude evenly.
void vote_orientation(double gx, double gy, double gt, std::span<double> bins);

/// Descriptors at every grid point whose support fits in the video, on the
/// luma channel. Throws DataError when the video is smaller than one window.
std::vector<Hog3dDescriptor> hog3d_descriptors(const FrameSequence& video,
                                               const Hog3dLayout& layout = {},
                                               Execution exec = Execution::parallel);

}  // namespace cinemagraph
