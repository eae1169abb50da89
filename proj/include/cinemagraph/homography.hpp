#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "cinemagraph/image.hpp"
#include "cinemagraph/tracking.hpp"

namespace cinemagraph {

using Homography = Eigen::Matrix3d;

/// Direct linear transform on Hartley-normalized points, h33 scaled to 1.
/// Maps src[i] to dst[i]. Throws DataError for fewer than 4 pairs and
/// NumericalError when the system is rank deficient.
Homography fit_homography(std::span<const Point2> src, std::span<const Point2> dst);

Point2 apply_homography(const Homography& h, const Point2& p);

/// Backward warp: out(p) = frame(h^-1 p) with bilinear sampling, border clamp.
Image warp_to_reference(const Image& frame, const Homography& frame_to_reference);

struct StabilizationResult {
  FrameSequence video;
  std::vector<Homography> homographies;  // frame -> reference, per frame
  std::vector<int> fallback_frames;      // frames left unwarped
};

/// Warps every frame onto the reference using the given (already filtered)
/// tracks. Frames with fewer than 4 usable tracks keep the identity.
StabilizationResult stabilize(const FrameSequence& video, const std::vector<FeatureTrack>& tracks);

/// Tracks the region, filters the tracks and stabilizes.
StabilizationResult stabilize(const FrameSequence& video, const PixelSet& region,
                              const TrackerParams& tracker = {}, const TrackFilter& filter = {});

}  // namespace cinemagraph
