#pragma once

#include <cstdint>

#include "cinemagraph/image.hpp"

namespace cinemagraph {

struct LabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Rec.601 luma, rounded to the nearest integer.
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);
inline std::uint8_t luma(Rgb c) { return luma(c[0], c[1], c[2]); }

/// sRGB (8-bit) to CIE L*a*b* with a D65 white point.
LabColor rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
inline LabColor rgb_to_lab(Rgb c) { return rgb_to_lab(c[0], c[1], c[2]); }

/// Inverse of rgb_to_lab, rounded and clamped to the 8-bit lattice.
Rgb lab_to_rgb(const LabColor& lab);

}  // namespace cinemagraph
