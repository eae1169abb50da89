#include "cinemagraph/display_classifier.hpp"

#include <algorithm>
#include <string>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

bool has_visible_sample(const PixelSet& segment, const VisibilityVolume& visibility) {
  for (int f = 0; f < visibility.frame_count(); ++f) {
    for (std::size_t p : segment) {
      if (visibility.visible(p, f)) return true;
    }
  }
  return false;
}

/// Positive flag per segment; fully occluded segments are negative.
std::vector<std::uint8_t> classify_segments(std::span<const PixelSet> segments,
                                            const ForestModel& model, const FeatureContext& ctx,
                                            Execution exec) {
  std::vector<std::uint8_t> positive(segments.size(), 0);
  const auto n = static_cast<std::int64_t>(segments.size());
  auto body = [&](std::int64_t i) {
    if (!has_visible_sample(segments[i], ctx.visibility())) return;
    const SegmentFeatures f = extract_features(segments[i], ctx);
    positive[i] = classify(model, f).label ? 1 : 0;
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  return positive;
}

}  // namespace

double annotation_overlap(const PixelSet& segment, const Mask& annotation) {
  if (segment.empty()) throw DataError("overlap of an empty segment");
  std::size_t inside = 0;
  for (std::size_t p : segment) inside += annotation[p] ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(segment.size());
}

std::vector<std::uint8_t> label_segments(std::span<const PixelSet> segments,
                                         const Mask& annotation, double positive_overlap) {
  if (annotation.size() == 0) throw DataError("missing annotation mask");
  std::vector<std::uint8_t> labels;
  labels.reserve(segments.size());
  for (const auto& s : segments) {
    labels.push_back(annotation_overlap(s, annotation) > positive_overlap ? 1 : 0);
  }
  return labels;
}

std::vector<PixelSet> connected_components(const Mask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> seen(mask.size(), 0);
  std::vector<PixelSet> out;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || seen[start]) continue;
    PixelSet comp;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      comp.push_back(p);
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const std::size_t nbrs[4] = {p - w, p - 1, p + 1, p + w};
      const bool ok[4] = {y > 0, x > 0, x + 1 < w, y + 1 < h};
      for (int k = 0; k < 4; ++k) {
        if (ok[k] && mask[nbrs[k]] && !seen[nbrs[k]]) {
          seen[nbrs[k]] = 1;
          stack.push_back(nbrs[k]);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

DisplaySelection filter_components(const Mask& union_mask, const VisibilityVolume& visibility,
                                   const SelectionParams& params) {
  DisplaySelection sel;
  sel.mask = Mask(union_mask.width(), union_mask.height(), 0);
  const double frame_pixels = static_cast<double>(union_mask.size());
  for (auto& comp : connected_components(union_mask)) {
    const std::size_t size = comp.size();
    if (size < params.min_component_pixels) {
      sel.dropped.push_back({size, "too small: fewer than " +
                                       std::to_string(params.min_component_pixels) + " pixels"});
      continue;
    }
    if (static_cast<double>(size) > params.max_component_fraction * frame_pixels) {
      sel.dropped.push_back({size, "too large: more than " +
                                       std::to_string(params.max_component_fraction) +
                                       " of the frame"});
      continue;
    }
    int occluded_frames = 0;
    for (int f = 0; f < visibility.frame_count(); ++f) {
      std::size_t invisible = 0;
      for (std::size_t p : comp) invisible += visibility.visible(p, f) ? 0 : 1;
      if (static_cast<double>(invisible) > params.invisible_pixel_fraction * double(size)) {
        ++occluded_frames;
      }
    }
    if (static_cast<double>(occluded_frames) >
        params.occluded_frame_fraction * visibility.frame_count()) {
      sel.dropped.push_back({size, "mostly invisible: occluded in " +
                                       std::to_string(occluded_frames) + " of " +
                                       std::to_string(visibility.frame_count()) + " frames"});
      continue;
    }
    for (std::size_t p : comp) sel.mask[p] = 1;
    sel.components.push_back(std::move(comp));
  }
  return sel;
}

std::vector<PixelSet> level_segments(const MergeHierarchy& hierarchy,
                                     std::span<const double> levels) {
  std::vector<PixelSet> out;
  for (double l : levels) {
    auto sets = regions_of(level(hierarchy, l));
    std::move(sets.begin(), sets.end(), std::back_inserter(out));
  }
  return out;
}

Mask positive_union(std::span<const PixelSet> segments, std::span<const std::uint8_t> positive,
                    int width, int height) {
  Mask mask(width, height, 0);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t p : segments[i]) mask[p] = 1;
  }
  return mask;
}

DisplaySelection select_display_regions(const MergeHierarchy& hierarchy, const ForestModel& model,
                                        const Hog3dCodebook& codebook, const FrameSequence& video,
                                        const VisibilityVolume& visibility,
                                        const SelectionParams& params, Execution exec) {
  if (model.feature_dim != kFeatureDim) {
    throw DataError("model expects " + std::to_string(model.feature_dim) + " features, not " +
                    std::to_string(kFeatureDim));
  }
  if (model.layout_version != kFeatureLayoutVersion) {
    throw DataError("model was trained with feature layout version " +
                    std::to_string(model.layout_version));
  }
  const FeatureContext ctx(video, visibility, codebook, exec);
  const auto segments = level_segments(hierarchy, params.levels);
  const auto positive = classify_segments(segments, model, ctx, exec);
  DisplaySelection sel = filter_components(
      positive_union(segments, positive, video.width(), video.height()), visibility, params);
  sel.segments_classified = segments.size();
  sel.segments_positive =
      static_cast<std::size_t>(std::count(positive.begin(), positive.end(), std::uint8_t{1}));
  return sel;
}

TrainingSamples harvest_training_samples(const FrameSequence& video,
                                         const VisibilityVolume& visibility,
                                         const Mask& annotation, const Hog3dCodebook& codebook,
                                         const SegmentationParams& segmentation,
                                         std::span<const double> levels, double positive_overlap,
                                         Execution exec) {
  if (annotation.width() != video.width() || annotation.height() != video.height()) {
    throw DataError("annotation mask does not match the video");
  }
  const MergeHierarchy hierarchy = segment(video, visibility, segmentation, exec);
  auto segments = level_segments(hierarchy, levels);
  std::erase_if(segments, [&](const PixelSet& s) { return !has_visible_sample(s, visibility); });
  const FeatureContext ctx(video, visibility, codebook, exec);
  const auto features = extract_features_batch(segments, ctx, exec);
  TrainingSamples out;
  out.labels = label_segments(segments, annotation, positive_overlap);
  out.features.reserve(features.size());
  for (const auto& f : features) out.features.emplace_back(f.begin(), f.end());
  return out;
}

}  // namespace cinemagraph
