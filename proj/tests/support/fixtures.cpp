#include "fixtures.hpp"

#include <array>

#include "cinemagraph/rng.hpp"

namespace fixtures {

using cinemagraph::Image;
using cinemagraph::Rng;

FrameSequence make_video(int width, int height, int frames,
                         const std::function<Rgb(int, int, int)>& color) {
  std::vector<Image> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int f = 0; f < frames; ++f) {
    Image img(width, height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) img.set(x, y, color(x, y, f));
    }
    out.push_back(std::move(img));
  }
  return FrameSequence(std::move(out));
}

Mask rect_mask(int width, int height, int x0, int y0, int x1, int y1) {
  Mask m(width, height, 0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m(x, y) = 1;
  }
  return m;
}

Rgb background(int x, int y) {
  const auto v = static_cast<std::uint8_t>(70 + 10 * ((x / 3 + y / 5) % 4) + (x * 7 + y * 3) % 9);
  return {v, static_cast<std::uint8_t>(v + 6), static_cast<std::uint8_t>(v - 8)};
}

FrameSequence blinking_square(int width, int height, int frames, int period, int x0, int y0,
                              int size, std::uint8_t on, std::uint8_t off) {
  return make_video(width, height, frames, [=](int x, int y, int f) -> Rgb {
    if (x >= x0 && x < x0 + size && y >= y0 && y < y0 + size) {
      const std::uint8_t v = (f % period) < period / 2 ? on : off;
      return {v, v, v};
    }
    return background(x, y);
  });
}

FrameSequence flicker_static(int width, int height, int frames, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> noise(static_cast<std::size_t>(width) * height * frames);
  for (auto& v : noise) v = static_cast<int>(rng.index(11)) - 5;
  return make_video(width, height, frames, [&](int x, int y, int f) -> Rgb {
    const int n = noise[(static_cast<std::size_t>(f) * height + y) * width + x];
    int v = 128;
    if (x < width / 2) v = (f / 4) % 2 == 0 ? 20 : 235;
    const auto c = static_cast<std::uint8_t>(v + n);
    return {c, c, c};
  });
}

Rgb display_color(std::uint64_t seed, int block, int f) {
  static constexpr std::array<Rgb, 4> kPalette = {
      Rgb{255, 0, 0}, Rgb{0, 0, 255}, Rgb{0, 0, 0}, Rgb{255, 0, 255}};
  Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(block) * 100003u + static_cast<std::uint64_t>(f));
  return kPalette[rng.index(kPalette.size())];
}

Clip display_clip(std::uint64_t seed, int width, int height, int frames, int display_x,
                  int display_y, int display_size, int blink_x, int blink_y, int blink_size) {
  Clip clip;
  clip.display = rect_mask(width, height, display_x, display_y, display_x + display_size,
                           display_y + display_size);
  clip.blink = rect_mask(width, height, blink_x, blink_y, blink_x + blink_size, blink_y + blink_size);
  const int blocks_per_row = (display_size + 7) / 8;
  clip.video = make_video(width, height, frames, [&](int x, int y, int f) -> Rgb {
    if (clip.display(x, y)) {
      const int block = ((y - display_y) / 8) * blocks_per_row + (x - display_x) / 8;
      return display_color(seed, block, f);
    }
    if (clip.blink(x, y)) {
      const std::uint8_t v = (f % 8) < 4 ? 255 : 200;
      return {v, v, v};
    }
    return background(x, y);
  });
  return clip;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cinemagraph_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
