#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cinemagraph/image.hpp"
#include "cinemagraph/parallel.hpp"
#include "cinemagraph/temporal_features.hpp"

namespace cinemagraph {

struct SegmentationParams {
  double initial_threshold = 0.2;
  double growth = 1.5;
  double appearance_weight = 0.1;
  /// Weight of the temporal (Hamming) term; 0 gives appearance-only merging.
  double temporal_weight = 1.0;
  DescriptorParams descriptor;
};

/// One greedy merge: region_b is absorbed into region_a (region_a < region_b).
/// Region ids are the smallest raster pixel index of the region.
struct MergeRecord {
  int region_a = 0;
  int region_b = 0;
  double distance = 0.0;
  double threshold = 0.0;
  friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

class MergeHierarchy {
 public:
  MergeHierarchy() = default;
  MergeHierarchy(int width, int height, std::vector<MergeRecord> merges)
      : width_(width), height_(height), merges_(std::move(merges)) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t initial_region_count() const { return static_cast<std::size_t>(width_) * height_; }
  std::size_t total_merges() const { return merges_.size(); }
  bool complete() const { return merges_.size() + 1 == initial_region_count(); }
  const std::vector<MergeRecord>& merges() const { return merges_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<MergeRecord> merges_;
};

/// A region with the data the merge distance is defined on.
struct RegionNode {
  PixelSet pixels;
  std::vector<RgbF> mean_color_series;
  TemporalBinaryPattern descriptor;
  LabHistogram histogram;
  std::size_t area() const { return pixels.size(); }
};

/// Region-pair distance: temporal_weight * D_T + appearance_weight * D_A.
/// D_A is taken as 0 when either region has no visible sample.
double region_distance(const TemporalBinaryPattern& pa, const LabHistogram& ha,
                       const TemporalBinaryPattern& pb, const LabHistogram& hb,
                       const SegmentationParams& params);

/// Greedy bottom-up merging of 4-adjacent regions until one region remains.
MergeHierarchy segment(const FrameSequence& video, const VisibilityVolume& visibility,
                       const SegmentationParams& params = {},
                       Execution exec = Execution::parallel);

/// Labeling after the first `merges` merges; dense ids in raster order of
/// each region's smallest pixel.
LabelMap labels_after(const MergeHierarchy& hierarchy, std::size_t merges);

/// Labeling after floor(percent / 100 * M) merges. percent in [0, 100].
LabelMap level(const MergeHierarchy& hierarchy, double percent);

/// Pixel sets of a labeling, indexed by label id.
std::vector<PixelSet> regions_of(const LabelMap& labels);

RegionNode make_region_node(PixelSet pixels, const FrameSequence& video,
                            const VisibilityVolume& visibility,
                            const SegmentationParams& params = {});

struct TaggedRegion {
  double level = 0.0;
  int label = 0;
  RegionNode node;
};

/// All regions present at each requested level, tagged by level.
std::vector<TaggedRegion> regions_at(const MergeHierarchy& hierarchy, const FrameSequence& video,
                                     const VisibilityVolume& visibility,
                                     std::span<const double> percents,
                                     const SegmentationParams& params = {});

}  // namespace cinemagraph
