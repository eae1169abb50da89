#include "cinemagraph/segment_features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <opencv2/imgproc.hpp>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

struct Corner {
  long long x, y;
  bool operator<(const Corner& o) const { return x != o.x ? x < o.x : y < o.y; }
  bool operator==(const Corner& o) const { return x == o.x && y == o.y; }
};

long long cross(const Corner& o, const Corner& a, const Corner& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Twice the area of the convex hull (Andrew's monotone chain), exact.
long long hull_area2(std::vector<Corner> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return 0;
  std::vector<Corner> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i > 0; --i) {
    const auto& p = pts[i - 1];
    while (k >= lo && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  long long area2 = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area2 += a.x * b.y - b.x * a.y;
  }
  return std::llabs(area2);
}

}  // namespace

int approximate_edge_count(const PixelSet& pixels, int width, int height, double tolerance) {
  if (pixels.empty()) return 0;
  // One pixel of padding keeps contours closed at the frame border.
  cv::Mat mask = cv::Mat::zeros(height + 2, width + 2, CV_8UC1);
  for (std::size_t p : pixels) {
    mask.at<std::uint8_t>(static_cast<int>(p / width) + 1, static_cast<int>(p % width) + 1) = 255;
  }
  std::vector<std::vector<cv::Point>> contours;
  cv::findContours(mask, contours, cv::RETR_EXTERNAL, cv::CHAIN_APPROX_NONE);
  if (contours.empty()) return 0;
  std::size_t largest = 0;
  double largest_area = -1.0;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    const double a = cv::contourArea(contours[i]) + 1e-6 * static_cast<double>(contours[i].size());
    if (a > largest_area) {
      largest_area = a;
      largest = i;
    }
  }
  std::vector<cv::Point> approx;
  cv::approxPolyDP(contours[largest], approx, tolerance, true);
  return static_cast<int>(approx.size());
}

ShapeFeatures shape_features(const PixelSet& pixels, int width, int height) {
  if (pixels.empty()) throw DataError("shape features of an empty segment");
  ShapeFeatures s;
  int min_x = width, min_y = height, max_x = -1, max_y = -1;
  std::vector<int> row_min(static_cast<std::size_t>(height), std::numeric_limits<int>::max());
  std::vector<int> row_max(static_cast<std::size_t>(height), -1);
  double sum_x = 0.0, sum_y = 0.0;
  for (std::size_t p : pixels) {
    const int x = static_cast<int>(p % width), y = static_cast<int>(p / width);
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
    row_min[y] = std::min(row_min[y], x);
    row_max[y] = std::max(row_max[y], x);
    sum_x += x + 0.5;
    sum_y += y + 0.5;
  }
  // The hull of pixel squares only depends on each row's extreme pixels.
  std::vector<Corner> corners;
  for (int y = min_y; y <= max_y; ++y) {
    if (row_max[y] < 0) continue;
    for (int x : {row_min[y], row_max[y] + 1}) {
      corners.push_back({x, y});
      corners.push_back({x, y + 1});
    }
  }
  const double area = static_cast<double>(pixels.size());
  const double bbox_w = max_x - min_x + 1, bbox_h = max_y - min_y + 1;
  s.area_ratio = area / (static_cast<double>(width) * height);
  s.convexity = area / (static_cast<double>(hull_area2(std::move(corners))) / 2.0);
  s.rectangleness = area / (bbox_w * bbox_h);
  s.aspect_ratio = bbox_w / bbox_h;
  s.edge_count = approximate_edge_count(pixels, width, height, 0.01 * std::min(width, height));
  s.centroid = {sum_x / area / width, sum_y / area / height};
  s.bbox = {double(min_x) / width, double(min_y) / height, double(max_x + 1) / width,
            double(max_y + 1) / height};
  return s;
}

FeatureContext::FeatureContext(const FrameSequence& video, const VisibilityVolume& visibility,
                               const Hog3dCodebook& codebook, Execution exec)
    : video_(&video), visibility_(&visibility), lab_(video, exec),
      codebook_size_(codebook.size()) {
  if (!visibility.matches(video)) throw DataError("visibility volume does not match the video");
  if (codebook.descriptor_dim() != codebook.layout.dimension()) {
    throw DataError("codebook dimension does not match its HoG3D layout");
  }
  if (codebook.size() != static_cast<std::size_t>(feature_block::kAreaRatio -
                                                  feature_block::kBagOfWords)) {
    throw DataError("codebook must have exactly " +
                    std::to_string(feature_block::kAreaRatio - feature_block::kBagOfWords) +
                    " centers");
  }
  const auto& layout = codebook.layout;
  if (video.width() < layout.window_xy || video.height() < layout.window_xy ||
      video.frame_count() < layout.window_t) {
    return;  // no grid point fits; every segment gets a zero BoW block
  }
  const auto descriptors = hog3d_descriptors(video, layout, exec);
  grid_words_.resize(descriptors.size());
  const auto n = static_cast<std::int64_t>(descriptors.size());
  auto body = [&](std::int64_t i) {
    const auto& d = descriptors[i];
    grid_words_[i] = {static_cast<std::size_t>(d.y) * video.width() + d.x, codebook.assign(d.values)};
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  std::stable_sort(grid_words_.begin(), grid_words_.end(),
                   [](const GridWord& a, const GridWord& b) { return a.pixel < b.pixel; });
}

SegmentFeatures extract_features(const PixelSet& segment, const FeatureContext& ctx) {
  if (segment.empty()) throw DataError("features of an empty segment");
  const FrameSequence& video = ctx.video();
  const VisibilityVolume& vis = ctx.visibility();
  SegmentFeatures v{};

  double sum[3] = {0, 0, 0}, sum2[3] = {0, 0, 0};
  double samples = 0.0;
  for (int f = 0; f < video.frame_count(); ++f) {
    const Image& img = video.frame(f);
    for (std::size_t p : segment) {
      if (!vis.visible(p, f)) continue;
      const Rgb c = img.at(p);
      for (int ch = 0; ch < 3; ++ch) {
        sum[ch] += c[ch];
        sum2[ch] += double(c[ch]) * c[ch];
      }
      samples += 1.0;
    }
  }
  if (samples == 0.0) throw DataError("segment is fully occluded: no visible samples");
  for (int ch = 0; ch < 3; ++ch) {
    const double mean = sum[ch] / samples;
    v[feature_block::kRgbMean + ch] = mean;
    v[feature_block::kRgbVariance + ch] = std::max(0.0, sum2[ch] / samples - mean * mean);
  }

  const LabHistogram hist = appearance_histogram(segment, ctx.lab(), vis);
  for (int i = 0; i < 3 * kLabBins; ++i) {
    v[feature_block::kLabHistogram + i] = hist.counts[i] / samples;
  }

  const auto& words = ctx.grid_words();
  double word_total = 0.0;
  if (!words.empty()) {
    for (std::size_t p : segment) {
      auto it = std::lower_bound(words.begin(), words.end(), p,
                                 [](const FeatureContext::GridWord& w, std::size_t px) {
                                   return w.pixel < px;
                                 });
      for (; it != words.end() && it->pixel == p; ++it) {
        v[feature_block::kBagOfWords + it->word] += 1.0;
        word_total += 1.0;
      }
    }
  }
  if (word_total > 0.0) {
    for (std::size_t i = 0; i < ctx.codebook_size(); ++i) {
      v[feature_block::kBagOfWords + i] /= word_total;
    }
  }

  const ShapeFeatures s = shape_features(segment, video.width(), video.height());
  v[feature_block::kAreaRatio] = s.area_ratio;
  v[feature_block::kConvexity] = s.convexity;
  v[feature_block::kRectangleness] = s.rectangleness;
  v[feature_block::kAspectRatio] = s.aspect_ratio;
  v[feature_block::kEdgeCount] = s.edge_count;
  v[feature_block::kCentroid] = s.centroid[0];
  v[feature_block::kCentroid + 1] = s.centroid[1];
  for (int i = 0; i < 4; ++i) v[feature_block::kBoundingBox + i] = s.bbox[i];
  return v;
}

SegmentFeatures extract_features(const PixelSet& segment, const FrameSequence& video,
                                 const VisibilityVolume& visibility,
                                 const Hog3dCodebook& codebook) {
  const FeatureContext ctx(video, visibility, codebook);
  return extract_features(segment, ctx);
}

std::vector<SegmentFeatures> extract_features_batch(std::span<const PixelSet> segments,
                                                    const FeatureContext& ctx, Execution exec) {
  std::vector<SegmentFeatures> out(segments.size());
  const auto n = static_cast<std::int64_t>(segments.size());
  std::string error;
  auto body = [&](std::int64_t i) { out[i] = extract_features(segments[i], ctx); };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (const std::exception& e) {
#pragma omp critical
        if (error.empty()) error = e.what();
      }
    }
    if (!error.empty()) throw DataError(error);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  return out;
}

}  // namespace cinemagraph
