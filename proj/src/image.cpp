#include "cinemagraph/image.hpp"

#include <algorithm>
#include <string>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

Image::Image(int width, int height) : Image(width, height, Rgb{0, 0, 0}) {}

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw DataError("image dimensions must be positive");
  data_.resize(3 * static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < pixel_count(); ++i) set(i, fill);
}

FrameSequence::FrameSequence(std::vector<Image> frames, int reference_index, double frame_rate)
    : frames_(std::move(frames)), reference_index_(reference_index), frame_rate_(frame_rate) {
  if (frames_.size() < 2) {
    throw DataError("a frame sequence needs at least 2 frames, got " +
                    std::to_string(frames_.size()));
  }
  const int w = frames_.front().width();
  const int h = frames_.front().height();
  for (std::size_t f = 0; f < frames_.size(); ++f) {
    if (frames_[f].width() != w || frames_[f].height() != h) {
      throw DataError("dimension mismatch: frame " + std::to_string(f) + " is " +
                      std::to_string(frames_[f].width()) + "x" +
                      std::to_string(frames_[f].height()) + ", expected " + std::to_string(w) +
                      "x" + std::to_string(h));
    }
  }
  set_reference_index(reference_index);
}

FrameSequence::FrameSequence(std::vector<Image> frames)
    : FrameSequence(std::move(frames), 0) {
  reference_index_ = frame_count() / 2;
}

void FrameSequence::set_reference_index(int index) {
  if (index < 0 || index >= frame_count()) {
    throw DataError("reference index " + std::to_string(index) + " outside [0, " +
                    std::to_string(frame_count()) + ")");
  }
  reference_index_ = index;
}

VisibilityVolume::VisibilityVolume(int width, int height, int frames, bool visible)
    : width_(width), height_(height), frames_(frames),
      bits_(static_cast<std::size_t>(width) * height * frames, visible ? 1 : 0) {}

VisibilityVolume VisibilityVolume::all_visible(const FrameSequence& video) {
  return VisibilityVolume(video.width(), video.height(), video.frame_count(), true);
}

bool VisibilityVolume::any_invisible() const {
  return std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

}  // namespace cinemagraph
