#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "cinemagraph/image.hpp"

namespace fixtures {

using cinemagraph::FrameSequence;
using cinemagraph::Mask;
using cinemagraph::Rgb;

FrameSequence make_video(int width, int height, int frames,
                         const std::function<Rgb(int x, int y, int f)>& color);

Mask rect_mask(int width, int height, int x0, int y0, int x1, int y1);  // [x0,x1) x [y0,y1)

/// Static gray-ish texture that never changes over time.
Rgb background(int x, int y);

/// Gray square alternating between `on` and `off` every period/2 frames on
/// the static background.
FrameSequence blinking_square(int width, int height, int frames, int period, int x0, int y0,
                              int size, std::uint8_t on = 255, std::uint8_t off = 200);

/// Left half flickers black/white every 4 frames, right half is static gray;
/// both halves carry small per-pixel noise that stays below theta.
FrameSequence flicker_static(int width, int height, int frames, std::uint64_t seed);

/// Dim "random display": 8x8 blocks drawing a fresh color from a saturated,
/// dark palette every frame (80th-percentile luma stays below 127).
Rgb display_color(std::uint64_t seed, int block, int f);

struct Clip {
  FrameSequence video;
  Mask display;  // ground-truth display pixels
  Mask blink;    // ground-truth blinking square
};

/// Static background + one blinking square (period 8) + one random display.
Clip display_clip(std::uint64_t seed, int width = 64, int height = 64, int frames = 64,
                  int display_x = 36, int display_y = 36, int display_size = 16, int blink_x = 8,
                  int blink_y = 8, int blink_size = 8);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

}  // namespace fixtures
