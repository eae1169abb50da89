#pragma once

#include <array>
#include <span>
#include <vector>

#include "cinemagraph/codebook.hpp"
#include "cinemagraph/image.hpp"
#include "cinemagraph/parallel.hpp"
#include "cinemagraph/temporal_features.hpp"

namespace cinemagraph {

inline constexpr int kFeatureDim = 141;
/// Bumped whenever the block order or a block definition changes; stored in
/// model files so stale models are rejected.
inline constexpr int kFeatureLayoutVersion = 1;

/// Offsets of each block inside the feature vector.
namespace feature_block {
inline constexpr int kRgbMean = 0;        // 3
inline constexpr int kRgbVariance = 3;    // 3
inline constexpr int kLabHistogram = 6;   // 24
inline constexpr int kBagOfWords = 30;    // 100
inline constexpr int kAreaRatio = 130;
inline constexpr int kConvexity = 131;
inline constexpr int kRectangleness = 132;
inline constexpr int kAspectRatio = 133;
inline constexpr int kEdgeCount = 134;
inline constexpr int kCentroid = 135;     // 2
inline constexpr int kBoundingBox = 137;  // 4: min x, min y, max x, max y
}  // namespace feature_block

using SegmentFeatures = std::array<double, kFeatureDim>;

struct ShapeFeatures {
  double area_ratio = 0.0;
  double convexity = 0.0;
  double rectangleness = 0.0;
  double aspect_ratio = 0.0;
  double edge_count = 0.0;
  std::array<double, 2> centroid{};
  std::array<double, 4> bbox{};
};

/// Shape and position features of a 2D pixel mask. Areas are measured in
/// pixel units (pixel squares), so an axis-aligned rectangle is exactly
/// convex and rectangular. The polygon tolerance is 1% of min(W, H).
ShapeFeatures shape_features(const PixelSet& pixels, int width, int height);

/// Number of edges of the Douglas-Peucker simplification of the largest
/// outer contour.
int approximate_edge_count(const PixelSet& pixels, int width, int height, double tolerance);

/// Per-video state shared by all segments: LAB bins and the codeword of every
/// HoG3D grid descriptor.
class FeatureContext {
 public:
  FeatureContext(const FrameSequence& video, const VisibilityVolume& visibility,
                 const Hog3dCodebook& codebook, Execution exec = Execution::parallel);

  const FrameSequence& video() const { return *video_; }
  const VisibilityVolume& visibility() const { return *visibility_; }
  const LabBinCache& lab() const { return lab_; }
  std::size_t codebook_size() const { return codebook_size_; }

  struct GridWord {
    std::size_t pixel;
    int word;
  };
  const std::vector<GridWord>& grid_words() const { return grid_words_; }

 private:
  const FrameSequence* video_;
  const VisibilityVolume* visibility_;
  LabBinCache lab_;
  std::size_t codebook_size_ = 0;
  std::vector<GridWord> grid_words_;
};

/// Full 141-value vector. Throws DataError for an empty segment or one with
/// no visible sample. Segments containing no grid point get a zero BoW block.
SegmentFeatures extract_features(const PixelSet& segment, const FeatureContext& context);
SegmentFeatures extract_features(const PixelSet& segment, const FrameSequence& video,
                                 const VisibilityVolume& visibility,
                                 const Hog3dCodebook& codebook);

std::vector<SegmentFeatures> extract_features_batch(std::span<const PixelSet> segments,
                                                    const FeatureContext& context,
                                                    Execution exec = Execution::parallel);

}  // namespace cinemagraph
