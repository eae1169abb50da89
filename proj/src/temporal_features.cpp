#include "cinemagraph/temporal_features.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "cinemagraph/color.hpp"
#include "cinemagraph/errors.hpp"

namespace cinemagraph {

std::size_t BitVector::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t BitVector::count_range(std::size_t first, std::size_t last) const {
  std::size_t n = 0;
  for (std::size_t i = first; i < last; ++i) n += (*this)[i] ? 1 : 0;
  return n;
}

std::size_t BitVector::hamming(const BitVector& other) const {
  if (size_ != other.size_) throw DataError("bit vectors differ in length");
  std::size_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
  }
  return n;
}

BitVector BitVector::concat(const BitVector& a, const BitVector& b) {
  BitVector out(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) out.set(a.size() + i, b[i]);
  return out;
}

std::size_t pattern_length(int n, int alpha, int beta) {
  if (alpha <= 0 || beta <= 0) throw UsageError("alpha and beta must be positive");
  if (n <= beta) return 0;
  return static_cast<std::size_t>((n - 1 - beta) / alpha) + 1;
}

BitVector binary_pattern(std::span<const RgbF> series, int alpha, int beta, double theta) {
  const int n = static_cast<int>(series.size());
  if (n <= beta) {
    throw DataError("series of " + std::to_string(n) + " frames is too short for lookahead " +
                    std::to_string(beta));
  }
  const std::size_t len = pattern_length(n, alpha, beta);
  BitVector bits(len);
  for (std::size_t i = 0; i < len; ++i) {
    const RgbF& a = series[alpha * i];
    const RgbF& b = series[alpha * i + beta];
    const double d0 = b[0] - a[0], d1 = b[1] - a[1], d2 = b[2] - a[2];
    // Compare squared norms so an exact jump of theta stays 0.
    bits.set(i, d0 * d0 + d1 * d1 + d2 * d2 > theta * theta);
  }
  return bits;
}

TemporalBinaryPattern full_descriptor(std::span<const RgbF> series, const DescriptorParams& p) {
  const int n = static_cast<int>(series.size());
  const int beta2 = p.beta2 > 0 ? p.beta2 : n / 2;
  const BitVector d1 = binary_pattern(series, p.alpha1, p.beta1, p.theta);
  const BitVector d2 = binary_pattern(series, p.alpha2, beta2, p.theta);
  return {BitVector::concat(d1, d2), d1.size(), d2.size()};
}

double pattern_distance(const TemporalBinaryPattern& a, const TemporalBinaryPattern& b) {
  if (a.bits.size() != b.bits.size()) {
    throw DataError("pattern length mismatch: " + std::to_string(a.bits.size()) + " vs " +
                    std::to_string(b.bits.size()));
  }
  if (a.bits.size() == 0) return 0.0;
  return static_cast<double>(a.bits.hamming(b.bits)) / static_cast<double>(a.bits.size());
}

double richness(const TemporalBinaryPattern& pattern) {
  if (pattern.len1 == 0) throw DataError("richness of an empty short-range block");
  return static_cast<double>(pattern.bits.count_range(0, pattern.len1)) /
         static_cast<double>(pattern.len1);
}

double LabHistogram::total() const {
  double t = 0.0;
  for (int i = 0; i < kLabBins; ++i) t += counts[i];
  return t;
}

int lab_bin(double value, double lo, double hi) {
  const int b = static_cast<int>(std::floor((value - lo) / (hi - lo) * kLabBins));
  return b < 0 ? 0 : (b >= kLabBins ? kLabBins - 1 : b);
}

namespace {

std::array<std::uint8_t, 3> bins_of(Rgb c) {
  const LabColor lab = rgb_to_lab(c);
  return {static_cast<std::uint8_t>(lab_bin(lab.L, 0.0, 100.0)),
          static_cast<std::uint8_t>(lab_bin(lab.a, -128.0, 128.0)),
          static_cast<std::uint8_t>(lab_bin(lab.b, -128.0, 128.0))};
}

void add_sample(LabHistogram& h, const std::array<std::uint8_t, 3>& bins) {
  h.counts[bins[0]] += 1.0;
  h.counts[kLabBins + bins[1]] += 1.0;
  h.counts[2 * kLabBins + bins[2]] += 1.0;
}

}  // namespace

LabBinCache::LabBinCache(const FrameSequence& video, Execution exec)
    : pixel_count_(video.pixel_count()), frames_(video.frame_count()),
      bins_(3 * video.pixel_count() * static_cast<std::size_t>(video.frame_count())) {
  const auto total = static_cast<std::int64_t>(pixel_count_) * frames_;
  auto body = [&](std::int64_t i) {
    const int f = static_cast<int>(i / static_cast<std::int64_t>(pixel_count_));
    const std::size_t p = static_cast<std::size_t>(i % static_cast<std::int64_t>(pixel_count_));
    const auto b = bins_of(video.frame(f).at(p));
    std::copy(b.begin(), b.end(), bins_.begin() + 3 * i);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < total; ++i) body(i);
  }
}

LabHistogram accumulate_histogram(const PixelSet& pixels, const FrameSequence& video,
                                  const VisibilityVolume& visibility) {
  LabHistogram h;
  for (int f = 0; f < video.frame_count(); ++f) {
    for (std::size_t p : pixels) {
      if (visibility.visible(p, f)) add_sample(h, bins_of(video.frame(f).at(p)));
    }
  }
  return h;
}

LabHistogram appearance_histogram(const PixelSet& pixels, const FrameSequence& video,
                                  const VisibilityVolume& visibility) {
  if (pixels.empty()) throw DataError("appearance histogram of an empty region");
  const LabHistogram h = accumulate_histogram(pixels, video, visibility);
  if (h.total() == 0.0) throw DataError("region is fully occluded: no visible samples");
  return h;
}

LabHistogram appearance_histogram(const PixelSet& pixels, const LabBinCache& cache,
                                  const VisibilityVolume& visibility) {
  if (pixels.empty()) throw DataError("appearance histogram of an empty region");
  LabHistogram h;
  for (std::size_t p : pixels) h += pixel_histogram(p, cache, visibility);
  if (h.total() == 0.0) throw DataError("region is fully occluded: no visible samples");
  return h;
}

LabHistogram pixel_histogram(std::size_t pixel, const LabBinCache& cache,
                             const VisibilityVolume& visibility) {
  LabHistogram h;
  for (int f = 0; f < cache.frame_count(); ++f) {
    if (visibility.visible(pixel, f)) add_sample(h, cache.bins(pixel, f));
  }
  return h;
}

double appearance_distance(const LabHistogram& h1, const LabHistogram& h2) {
  double dot = 0.0, n1 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < h1.counts.size(); ++i) {
    dot += h1.counts[i] * h2.counts[i];
    n1 += h1.counts[i] * h1.counts[i];
    n2 += h2.counts[i] * h2.counts[i];
  }
  if (n1 == 0.0 || n2 == 0.0) throw DataError("appearance distance of a zero histogram");
  return 1.0 - dot / (std::sqrt(n1) * std::sqrt(n2));
}

template <typename T>
std::vector<T> fill_invisible(std::span<const T> series, std::span<const std::uint8_t> visible) {
  std::vector<T> out(series.begin(), series.end());
  const int n = static_cast<int>(series.size());
  // Distance to the nearest visible frame on each side.
  std::vector<int> prev(series.size(), -1), next(series.size(), -1);
  int last = -1;
  for (int f = 0; f < n; ++f) {
    if (visible[f]) last = f;
    prev[f] = last;
  }
  last = -1;
  for (int f = n - 1; f >= 0; --f) {
    if (visible[f]) last = f;
    next[f] = last;
  }
  for (int f = 0; f < n; ++f) {
    if (visible[f]) continue;
    const int p = prev[f], q = next[f];
    if (p < 0 && q < 0) return out;
    if (q < 0 || (p >= 0 && f - p <= q - f)) {
      out[f] = series[p];
    } else {
      out[f] = series[q];
    }
  }
  return out;
}

template std::vector<RgbF> fill_invisible<RgbF>(std::span<const RgbF>, std::span<const std::uint8_t>);
template std::vector<double> fill_invisible<double>(std::span<const double>,
                                                    std::span<const std::uint8_t>);

std::vector<RgbF> pixel_color_series(const FrameSequence& video,
                                     const VisibilityVolume& visibility, std::size_t pixel) {
  const int n = video.frame_count();
  std::vector<RgbF> series(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> vis(static_cast<std::size_t>(n));
  bool all_visible = true;
  for (int f = 0; f < n; ++f) {
    const Rgb c = video.frame(f).at(pixel);
    series[f] = {double(c[0]), double(c[1]), double(c[2])};
    vis[f] = visibility.visible(pixel, f) ? 1 : 0;
    all_visible = all_visible && vis[f];
  }
  if (all_visible) return series;
  return fill_invisible<RgbF>(series, vis);
}

}  // namespace cinemagraph
