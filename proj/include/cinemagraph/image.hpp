#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cinemagraph {

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

using Rgb = std::array<std::uint8_t, 3>;
using RgbF = std::array<double, 3>;

/// Interleaved 8-bit RGB image, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height);
  Image(int width, int height, Rgb fill);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  Rgb at(int x, int y) const {
    const std::size_t o = offset(x, y);
    return {data_[o], data_[o + 1], data_[o + 2]};
  }
  Rgb at(std::size_t index) const {
    return {data_[3 * index], data_[3 * index + 1], data_[3 * index + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t o = offset(x, y);
    data_[o] = c[0];
    data_[o + 1] = c[1];
    data_[o + 2] = c[2];
  }
  void set(std::size_t index, Rgb c) {
    data_[3 * index] = c[0];
    data_[3 * index + 1] = c[1];
    data_[3 * index + 2] = c[2];
  }

  std::span<std::uint8_t> bytes() { return data_; }
  std::span<const std::uint8_t> bytes() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return 3 * (static_cast<std::size_t>(y) * width_ + static_cast<std::size_t>(x));
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Single-channel H x W grid, row-major. Used for masks, label maps and
/// scalar fields.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }
  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// std::vector<bool> is avoided so masks can be written from parallel loops.
using Mask = Grid<std::uint8_t>;
using LabelMap = Grid<int>;

/// N aligned color frames plus the index of the reference frame.
///
/// Invariants: N >= 2, all frames share one size, reference_index < N.
/// Constructors throw DataError when these do not hold.
class FrameSequence {
 public:
  FrameSequence() = default;
  FrameSequence(std::vector<Image> frames, int reference_index, double frame_rate = 30.0);
  /// Reference frame defaults to floor(N/2).
  explicit FrameSequence(std::vector<Image> frames);

  int frame_count() const { return static_cast<int>(frames_.size()); }
  int width() const { return frames_.empty() ? 0 : frames_.front().width(); }
  int height() const { return frames_.empty() ? 0 : frames_.front().height(); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width()) * height(); }
  int reference_index() const { return reference_index_; }
  double frame_rate() const { return frame_rate_; }

  const Image& frame(int f) const { return frames_[static_cast<std::size_t>(f)]; }
  Image& frame(int f) { return frames_[static_cast<std::size_t>(f)]; }
  const Image& reference() const { return frame(reference_index_); }
  const std::vector<Image>& frames() const { return frames_; }

  void set_reference_index(int index);

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;

 private:
  std::vector<Image> frames_;
  int reference_index_ = 0;
  double frame_rate_ = 30.0;
};

/// Per-pixel, per-frame visibility flags. A default-constructed-for-size
/// volume is all visible.
class VisibilityVolume {
 public:
  VisibilityVolume() = default;
  VisibilityVolume(int width, int height, int frames, bool visible = true);
  static VisibilityVolume all_visible(const FrameSequence& video);

  int width() const { return width_; }
  int height() const { return height_; }
  int frame_count() const { return frames_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  bool visible(std::size_t pixel, int f) const {
    return bits_[static_cast<std::size_t>(f) * pixel_count() + pixel] != 0;
  }
  bool visible(int x, int y, int f) const {
    return visible(static_cast<std::size_t>(y) * width_ + x, f);
  }
  void set(std::size_t pixel, int f, bool v) {
    bits_[static_cast<std::size_t>(f) * pixel_count() + pixel] = v ? 1 : 0;
  }
  void set(int x, int y, int f, bool v) { set(static_cast<std::size_t>(y) * width_ + x, f, v); }

  bool matches(const FrameSequence& video) const {
    return width_ == video.width() && height_ == video.height() &&
           frames_ == video.frame_count();
  }
  bool any_invisible() const;

  friend bool operator==(const VisibilityVolume&, const VisibilityVolume&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int frames_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Pixel indices (y * W + x) of a region, sorted ascending.
using PixelSet = std::vector<std::size_t>;

}  // namespace cinemagraph
