#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cinemagraph/image.hpp"
#include "cinemagraph/parallel.hpp"

namespace cinemagraph {

/// Fixed-length bit vector packed into 64-bit words.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool operator[](std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    words_[i / 64] = v ? (words_[i / 64] | m) : (words_[i / 64] & ~m);
  }
  std::size_t count() const;
  std::size_t count_range(std::size_t first, std::size_t last) const;
  /// Number of positions where the two vectors differ. Sizes must match.
  std::size_t hamming(const BitVector& other) const;

  static BitVector concat(const BitVector& a, const BitVector& b);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Concatenated short-range (first block) and long-range (second block)
/// temporal change bits of a color series.
struct TemporalBinaryPattern {
  BitVector bits;
  std::size_t len1 = 0;
  std::size_t len2 = 0;
  friend bool operator==(const TemporalBinaryPattern&, const TemporalBinaryPattern&) = default;
};

struct DescriptorParams {
  int alpha1 = 4;
  int beta1 = 4;
  int alpha2 = 2;
  /// Second-block lookahead; <= 0 means floor(N/2).
  int beta2 = 0;
  double theta = 100.0;
};

/// Number of sample indices i >= 0 with alpha*i + beta <= n - 1.
std::size_t pattern_length(int n, int alpha, int beta);

/// Bit i is set iff the RGB distance between series[alpha*i + beta] and
/// series[alpha*i] strictly exceeds theta. Throws DataError when
/// series.size() <= beta.
BitVector binary_pattern(std::span<const RgbF> series, int alpha, int beta, double theta);

TemporalBinaryPattern full_descriptor(std::span<const RgbF> series,
                                      const DescriptorParams& params = {});

/// Hamming distance normalized by the pattern length, in [0, 1].
double pattern_distance(const TemporalBinaryPattern& a, const TemporalBinaryPattern& b);

/// Fraction of set bits in the first (short-range) block.
double richness(const TemporalBinaryPattern& pattern);

inline constexpr int kLabBins = 8;

/// 8 bins for each of L in [0,100], a and b in [-128,128], concatenated.
struct LabHistogram {
  std::array<double, 3 * kLabBins> counts{};

  LabHistogram& operator+=(const LabHistogram& other) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
  }
  double total() const;  // samples contributing (sum of the L block)
  friend bool operator==(const LabHistogram&, const LabHistogram&) = default;
};

/// Bin index for value in [lo, hi] split into kLabBins uniform bins; values
/// outside the range clamp to the end bins.
int lab_bin(double value, double lo, double hi);

/// Per (pixel, frame) LAB bin indices, computed once per video. Rows are
/// frames, so index = f * pixel_count + pixel.
class LabBinCache {
 public:
  LabBinCache() = default;
  LabBinCache(const FrameSequence& video, Execution exec = Execution::parallel);

  std::array<std::uint8_t, 3> bins(std::size_t pixel, int f) const {
    const std::size_t o = 3 * (static_cast<std::size_t>(f) * pixel_count_ + pixel);
    return {bins_[o], bins_[o + 1], bins_[o + 2]};
  }
  std::size_t pixel_count() const { return pixel_count_; }
  int frame_count() const { return frames_; }

  friend bool operator==(const LabBinCache&, const LabBinCache&) = default;

 private:
  std::size_t pixel_count_ = 0;
  int frames_ = 0;
  std::vector<std::uint8_t> bins_;
};

/// Histogram over every visible (pixel, frame) sample of the region. Throws
/// DataError for an empty pixel set or when no sample is visible.
LabHistogram appearance_histogram(const PixelSet& pixels, const FrameSequence& video,
                                  const VisibilityVolume& visibility);
LabHistogram appearance_histogram(const PixelSet& pixels, const LabBinCache& cache,
                                  const VisibilityVolume& visibility);
/// Like appearance_histogram, but returns an empty histogram instead of
/// throwing.
LabHistogram accumulate_histogram(const PixelSet& pixels, const FrameSequence& video,
                                  const VisibilityVolume& visibility);
/// Histogram of a single pixel; may be all-zero when the pixel is never
/// visible (no error).
LabHistogram pixel_histogram(std::size_t pixel, const LabBinCache& cache,
                             const VisibilityVolume& visibility);

/// One minus the normalized cross correlation of the two 24-vectors.
/// Throws DataError when either histogram has zero norm.
double appearance_distance(const LabHistogram& h1, const LabHistogram& h2);

/// Replaces invisible entries by the nearest visible entry in time (earlier
/// frame wins a tie). A series with no visible entry is returned unchanged.
template <typename T>
std::vector<T> fill_invisible(std::span<const T> series, std::span<const std::uint8_t> visible);

/// Color series of one pixel, with invisible frames filled.
std::vector<RgbF> pixel_color_series(const FrameSequence& video,
                                     const VisibilityVolume& visibility, std::size_t pixel);

}  // namespace cinemagraph
