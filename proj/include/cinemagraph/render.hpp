#pragma once

#include <array>
#include <span>
#include <vector>

#include "cinemagraph/image.hpp"
#include "cinemagraph/manifest.hpp"
#include "cinemagraph/rpca.hpp"
#include "cinemagraph/temporal_features.hpp"

namespace cinemagraph {

/// lambda = base + slope * gamma. Throws UsageError for gamma outside [0, 1].
double adaptive_lambda(double gamma, double base = 0.005, double slope = 0.015);

struct RegularizeParams {
  double lambda_base = 0.005;
  double lambda_slope = 0.015;
  DescriptorParams descriptor;
  RpcaParams rpca;  // lambda is overwritten by the adaptive rule
};

/// A region's colors over all N frames, frame-major: colors[f * size + k]
/// belongs to pixels[k].
struct RegionVideo {
  PixelSet pixels;
  std::vector<Rgb> colors;
  int frames = 0;

  Rgb at(int f, std::size_t k) const {
    return colors[static_cast<std::size_t>(f) * pixels.size() + k];
  }
};

RegionVideo extract_region_video(const FrameSequence& video, const PixelSet& pixels);

struct RegularizedSegment {
  RegionVideo video;
  double gamma = 0.0;
  double lambda = 0.0;
  std::array<int, 3> iterations{};
  std::array<std::vector<RpcaTraceEntry>, 3> traces;
};

/// Per channel: rows = frames, columns = segment pixels, scaled to [0, 1];
/// RPCA with the adaptive lambda of the segment's richness; the low-rank
/// part is written back to [0, 255] with rounding and clamping.
/// Throws DataError for an empty segment.
RegularizedSegment regularize_segment(const FrameSequence& video, const PixelSet& segment,
                                      const RegularizeParams& params = {});

/// Loop frame t -> source frame for forward-backward playback of N frames.
int ping_pong_source(int t, int frames);
/// Loop frame t -> source frame when tiling [first, last] cyclically.
int tiled_source(int t, const FrameInterval& interval);
inline int loop_length(int frames) { return 2 * (frames - 1); }

struct RenderInputs {
  const FrameSequence* source = nullptr;
  std::span<const RegionVideo> display_regions;
  const Mask* repetitive_mask = nullptr;
  const Grid<FrameInterval>* repetitive_intervals = nullptr;
  int feather_px = 2;
};

/// 2(N-1)-frame loop over the reference frame. Display pixels ping-pong,
/// repetitive pixels tile their interval, everything else is frozen.
/// Display regions fade in over `feather_px` pixels inside their boundary;
/// display wins where a pixel is in both kinds of mask.
FrameSequence render_loop(const RenderInputs& inputs);

/// Alpha in [0, 1] for each display pixel: min(1, d / (feather_px + 1)) with
/// d the 4-connected distance to the nearest pixel outside the mask.
Grid<double> feather_alpha(const Mask& mask, int feather_px);

}  // namespace cinemagraph
