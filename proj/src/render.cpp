#include "cinemagraph/render.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

double adaptive_lambda(double gamma, double base, double slope) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw UsageError("richness gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
  return base + slope * gamma;
}

RegionVideo extract_region_video(const FrameSequence& video, const PixelSet& pixels) {
  RegionVideo out;
  out.pixels = pixels;
  out.frames = video.frame_count();
  out.colors.resize(static_cast<std::size_t>(out.frames) * pixels.size());
  for (int f = 0; f < out.frames; ++f) {
    const Image& img = video.frame(f);
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      out.colors[static_cast<std::size_t>(f) * pixels.size() + k] = img.at(pixels[k]);
    }
  }
  return out;
}

RegularizedSegment regularize_segment(const FrameSequence& video, const PixelSet& segment,
                                      const RegularizeParams& params) {
  if (segment.empty()) throw DataError("cannot regularize an empty segment");
  RegularizedSegment out;
  out.video = extract_region_video(video, segment);
  const int n = video.frame_count();
  const auto m = static_cast<Eigen::Index>(segment.size());

  std::vector<RgbF> mean(static_cast<std::size_t>(n), RgbF{});
  for (int f = 0; f < n; ++f) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const Rgb c = out.video.at(f, static_cast<std::size_t>(k));
      for (int ch = 0; ch < 3; ++ch) mean[f][ch] += c[ch];
    }
    for (int ch = 0; ch < 3; ++ch) mean[f][ch] /= static_cast<double>(m);
  }
  const auto& dp = params.descriptor;
  out.gamma = richness({binary_pattern(mean, dp.alpha1, dp.beta1, dp.theta),
                        pattern_length(n, dp.alpha1, dp.beta1), 0});
  out.lambda = adaptive_lambda(out.gamma, params.lambda_base, params.lambda_slope);

  RpcaParams rp = params.rpca;
  rp.lambda = out.lambda;
  std::array<Eigen::MatrixXd, 3> low;
#pragma omp parallel for schedule(static)
  for (int ch = 0; ch < 3; ++ch) {
    Eigen::MatrixXd p(n, m);
    for (int f = 0; f < n; ++f) {
      for (Eigen::Index k = 0; k < m; ++k) {
        p(f, k) = out.video.at(f, static_cast<std::size_t>(k))[ch] / 255.0;
      }
    }
    RpcaResult r = rpca_apg(p, rp);
    out.iterations[ch] = r.iterations;
    out.traces[ch] = std::move(r.trace);
    low[ch] = std::move(r.low_rank);
  }
  for (int f = 0; f < n; ++f) {
    for (Eigen::Index k = 0; k < m; ++k) {
      Rgb c{};
      for (int ch = 0; ch < 3; ++ch) {
        c[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(low[ch](f, k) * 255.0), 0L, 255L));
      }
      out.video.colors[static_cast<std::size_t>(f) * segment.size() + static_cast<std::size_t>(k)] = c;
    }
  }
  return out;
}

int ping_pong_source(int t, int frames) {
  if (frames < 2) throw UsageError("ping-pong needs at least 2 frames");
  const int period = loop_length(frames);
  t %= period;
  if (t < 0) t += period;
  return t < frames ? t : period - t;
}

int tiled_source(int t, const FrameInterval& interval) {
  const int len = interval.length();
  if (len <= 0) throw UsageError("tiling interval is empty");
  int r = t % len;
  if (r < 0) r += len;
  return interval.first + r;
}

Grid<double> feather_alpha(const Mask& mask, int feather_px) {
  const int w = mask.width(), h = mask.height();
  constexpr int kFar = std::numeric_limits<int>::max();
  Grid<int> dist(w, h, kFar);
  std::deque<std::size_t> queue;
  // Multi-source BFS seeded by the mask pixels that touch the outside.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y)) continue;
      const bool edge = (x > 0 && !mask(x - 1, y)) || (x + 1 < w && !mask(x + 1, y)) ||
                        (y > 0 && !mask(x, y - 1)) || (y + 1 < h && !mask(x, y + 1));
      if (edge) {
        dist(x, y) = 1;
        queue.push_back(static_cast<std::size_t>(y) * w + x);
      }
    }
  }
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
    const int d = dist(x, y) + 1;
    const int nx[4] = {x - 1, x + 1, x, x};
    const int ny[4] = {y, y, y - 1, y + 1};
    for (int i = 0; i < 4; ++i) {
      if (nx[i] < 0 || ny[i] < 0 || nx[i] >= w || ny[i] >= h) continue;
      if (!mask(nx[i], ny[i]) || dist(nx[i], ny[i]) <= d) continue;
      dist(nx[i], ny[i]) = d;
      queue.push_back(static_cast<std::size_t>(ny[i]) * w + nx[i]);
    }
  }
  Grid<double> alpha(w, h, 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!mask[i]) continue;
    alpha[i] = dist[i] == kFar ? 1.0
                               : std::min(1.0, dist[i] / static_cast<double>(feather_px + 1));
  }
  return alpha;
}

FrameSequence render_loop(const RenderInputs& in) {
  if (in.source == nullptr) throw UsageError("render_loop needs a source video");
  const FrameSequence& src = *in.source;
  const int n = src.frame_count();
  const int w = src.width(), h = src.height();
  const std::size_t hw = src.pixel_count();
  if (in.repetitive_mask != nullptr) {
    if (in.repetitive_intervals == nullptr) throw UsageError("repetitive mask without intervals");
    if (in.repetitive_mask->width() != w || in.repetitive_mask->height() != h ||
        in.repetitive_intervals->width() != w || in.repetitive_intervals->height() != h) {
      throw DataError("repetitive field size differs from the video");
    }
  }
  if (in.feather_px < 0) throw UsageError("feather width must be >= 0");

  // Owner region and slot of each display pixel.
  std::vector<int> owner(hw, -1);
  std::vector<std::size_t> slot(hw, 0);
  Mask display(w, h, 0);
  for (std::size_t r = 0; r < in.display_regions.size(); ++r) {
    const RegionVideo& rv = in.display_regions[r];
    if (rv.frames != n) throw DataError("display region video length differs from the source");
    for (std::size_t k = 0; k < rv.pixels.size(); ++k) {
      const std::size_t p = rv.pixels[k];
      if (p >= hw) throw DataError("display region pixel outside the frame");
      owner[p] = static_cast<int>(r);
      slot[p] = k;
      display[p] = 1;
    }
  }
  const Grid<double> alpha = feather_alpha(display, in.feather_px);
  const Image& ref = src.reference();
  const int length = loop_length(n);

  std::vector<Image> frames(static_cast<std::size_t>(length));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < length; ++t) {
    Image out = ref;
    const int pp = ping_pong_source(t, n);
    for (std::size_t p = 0; p < hw; ++p) {
      Rgb base = ref.at(p);
      if (in.repetitive_mask != nullptr && (*in.repetitive_mask)[p]) {
        base = src.frame(tiled_source(t, (*in.repetitive_intervals)[p])).at(p);
      }
      if (owner[p] >= 0) {
        const Rgb fg = in.display_regions[static_cast<std::size_t>(owner[p])].at(pp, slot[p]);
        const double a = alpha[p];
        Rgb c{};
        for (int ch = 0; ch < 3; ++ch) {
          c[ch] = static_cast<std::uint8_t>(std::lround(a * fg[ch] + (1.0 - a) * base[ch]));
        }
        out.set(p, c);
      } else {
        out.set(p, base);
      }
    }
    frames[static_cast<std::size_t>(t)] = std::move(out);
  }
  return FrameSequence(std::move(frames), 0, src.frame_rate());
}

}  // namespace cinemagraph
