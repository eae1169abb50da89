#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cinemagraph/codebook.hpp"
#include "cinemagraph/image.hpp"
#include "cinemagraph/manifest.hpp"
#include "cinemagraph/random_forest.hpp"
#include "cinemagraph/segment_features.hpp"
#include "cinemagraph/segmentation.hpp"

namespace cinemagraph {

/// |segment ∩ annotated| / |segment| on a reference-frame mask.
double annotation_overlap(const PixelSet& segment, const Mask& annotation);

/// 1 when the overlap strictly exceeds `positive_overlap`, else 0.
std::vector<std::uint8_t> label_segments(std::span<const PixelSet> segments,
                                         const Mask& annotation,
                                         double positive_overlap = 0.8);

struct SelectionParams {
  std::vector<double> levels{60.0, 70.0, 80.0};
  std::size_t min_component_pixels = 50;
  double max_component_fraction = 0.30;
  /// A frame counts as occluded for a component when more than this fraction
  /// of its pixels is invisible; the component is dropped when more than
  /// `occluded_frame_fraction` of the frames are occluded.
  double invisible_pixel_fraction = 0.5;
  double occluded_frame_fraction = 0.5;
};

struct DisplaySelection {
  Mask mask;
  /// Kept 4-connected components, in raster order of their first pixel.
  std::vector<PixelSet> components;
  std::vector<DroppedComponent> dropped;
  std::size_t segments_classified = 0;
  std::size_t segments_positive = 0;
};

/// 4-connected components of a mask, in raster order of their first pixel.
std::vector<PixelSet> connected_components(const Mask& mask);

/// Applies the size and visibility filters to the connected components of
/// the union of positive segments.
DisplaySelection filter_components(const Mask& union_mask, const VisibilityVolume& visibility,
                                   const SelectionParams& params = {});

/// Segments of every level in `params.levels`, deduplicated per level.
std::vector<PixelSet> level_segments(const MergeHierarchy& hierarchy,
                                     std::span<const double> levels);

/// Union of positive segments (before filtering).
Mask positive_union(std::span<const PixelSet> segments, std::span<const std::uint8_t> positive,
                    int width, int height);

DisplaySelection select_display_regions(const MergeHierarchy& hierarchy, const ForestModel& model,
                                        const Hog3dCodebook& codebook, const FrameSequence& video,
                                        const VisibilityVolume& visibility,
                                        const SelectionParams& params = {},
                                        Execution exec = Execution::parallel);

/// Labeled feature rows harvested from one annotated clip.
struct TrainingSamples {
  std::vector<std::vector<double>> features;
  std::vector<std::uint8_t> labels;
};

/// Segments the clip, extracts features for every segment at `levels`, and
/// labels them against the reference-frame annotation.
TrainingSamples harvest_training_samples(const FrameSequence& video,
                                         const VisibilityVolume& visibility,
                                         const Mask& annotation, const Hog3dCodebook& codebook,
                                         const SegmentationParams& segmentation,
                                         std::span<const double> levels,
                                         double positive_overlap = 0.8,
                                         Execution exec = Execution::parallel);

}  // namespace cinemagraph
