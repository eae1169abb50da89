#include "cinemagraph/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cinemagraph {

namespace {

// sRGB primaries, D65.
constexpr double kM[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                             {0.2126729, 0.7151522, 0.0721750},
                             {0.0193339, 0.1191920, 0.9503041}};
// White point taken as the image of sRGB white so white maps to a = b = 0.
constexpr double kWhite[3] = {kM[0][0] + kM[0][1] + kM[0][2], kM[1][0] + kM[1][1] + kM[1][2],
                              kM[2][0] + kM[2][1] + kM[2][2]};
constexpr double kDelta = 6.0 / 29.0;

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

double lab_f(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
  return t > kDelta ? t * t * t : 3 * kDelta * kDelta * (t - 4.0 / 29.0);
}

double to_srgb(double linear) {
  linear = std::clamp(linear, 0.0, 1.0);
  return linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

}  // namespace

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

LabColor rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const auto& lin = linear_table();
  const double rl = lin[r], gl = lin[g], bl = lin[b];
  double xyz[3];
  for (int i = 0; i < 3; ++i) xyz[i] = kM[i][0] * rl + kM[i][1] * gl + kM[i][2] * bl;
  const double fx = lab_f(xyz[0] / kWhite[0]);
  const double fy = lab_f(xyz[1] / kWhite[1]);
  const double fz = lab_f(xyz[2] / kWhite[2]);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb lab_to_rgb(const LabColor& lab) {
  const double fy = (lab.L + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  const double xyz[3] = {kWhite[0] * lab_f_inv(fx), kWhite[1] * lab_f_inv(fy),
                         kWhite[2] * lab_f_inv(fz)};
  // Inverse of kM.
  static const auto inv = [] {
    const double a = kM[0][0], b = kM[0][1], c = kM[0][2];
    const double d = kM[1][0], e = kM[1][1], f = kM[1][2];
    const double g = kM[2][0], h = kM[2][1], i = kM[2][2];
    const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    std::array<std::array<double, 3>, 3> m{};
    m[0] = {(e * i - f * h) / det, (c * h - b * i) / det, (b * f - c * e) / det};
    m[1] = {(f * g - d * i) / det, (a * i - c * g) / det, (c * d - a * f) / det};
    m[2] = {(d * h - e * g) / det, (b * g - a * h) / det, (a * e - b * d) / det};
    return m;
  }();
  Rgb out{};
  for (int ch = 0; ch < 3; ++ch) {
    const double linear = inv[ch][0] * xyz[0] + inv[ch][1] * xyz[1] + inv[ch][2] * xyz[2];
    out[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * to_srgb(linear)), 0L, 255L));
  }
  return out;
}

}  // namespace cinemagraph
