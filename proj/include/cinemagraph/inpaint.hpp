#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cinemagraph/image.hpp"

namespace cinemagraph {

struct InpaintParams {
  double tolerance = 1e-3;  // max per-sweep update, intensity levels
  int max_sweeps = 10000;
};

struct InpaintStats {
  int sweeps = 0;
  double max_update = 0.0;
  std::size_t unknowns = 0;
};

/// Role of each volume entry in solve_laplace.
enum class CellRole : std::uint8_t { known = 0, unknown = 1, ignored = 2 };

/// Solves the discrete Laplace equation on a W x H x N scalar volume
/// (index = (f * H + y) * W + x) for the unknown entries, with known entries
/// as Dirichlet boundary. Ignored entries take no part (zero-flux). Uses
/// 6-connected space-time neighbors and Gauss-Seidel sweeps, in place.
/// Throws DataError when an unknown component touches no known entry.
InpaintStats solve_laplace(std::span<double> volume, std::span<const CellRole> roles,
                           int width, int height, int frames, const InpaintParams& params = {});

/// Fills every invisible (pixel, frame) entry of the region's pixels.
FrameSequence inpaint(const FrameSequence& video, const VisibilityVolume& visibility,
                      const PixelSet& region, const InpaintParams& params = {},
                      InpaintStats* stats = nullptr);

}  // namespace cinemagraph
