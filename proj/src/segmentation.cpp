#include "cinemagraph/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

struct RegionState {
  std::vector<double> color_sum;  // 3 values per frame
  std::size_t area = 0;
  TemporalBinaryPattern descriptor;
  LabHistogram histogram;
  std::vector<int> neighbors;  // sorted region ids
  unsigned stamp = 0;
  bool alive = true;
};

struct HeapEntry {
  double distance;
  int a;
  int b;
  unsigned stamp_a;
  unsigned stamp_b;
};

// Min-heap on (distance, a, b).
struct HeapOrder {
  bool operator()(const HeapEntry& x, const HeapEntry& y) const {
    if (x.distance != y.distance) return x.distance > y.distance;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

std::vector<RgbF> mean_series(const std::vector<double>& sum, std::size_t area) {
  const double n = static_cast<double>(area);
  std::vector<RgbF> out(sum.size() / 3);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f] = {sum[3 * f] / n, sum[3 * f + 1] / n, sum[3 * f + 2] / n};
  }
  return out;
}

std::vector<int> merged_neighbors(const std::vector<int>& x, const std::vector<int>& y, int a,
                                  int b) {
  std::vector<int> out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  std::erase_if(out, [&](int r) { return r == a || r == b; });
  return out;
}

class Merger {
 public:
  Merger(const FrameSequence& video, const VisibilityVolume& visibility,
         const SegmentationParams& params, Execution exec)
      : params_(params), width_(video.width()), height_(video.height()),
        regions_(video.pixel_count()) {
    const LabBinCache lab(video, exec);
    const auto n = static_cast<std::int64_t>(video.pixel_count());
    auto init = [&](std::int64_t i) {
      const auto p = static_cast<std::size_t>(i);
      RegionState& r = regions_[p];
      const auto series = pixel_color_series(video, visibility, p);
      r.color_sum.resize(3 * series.size());
      for (std::size_t f = 0; f < series.size(); ++f) {
        for (int c = 0; c < 3; ++c) r.color_sum[3 * f + c] = series[f][c];
      }
      r.area = 1;
      r.descriptor = full_descriptor(series, params_.descriptor);
      r.histogram = pixel_histogram(p, lab, visibility);
      const int x = static_cast<int>(p % width_), y = static_cast<int>(p / width_);
      if (y > 0) r.neighbors.push_back(static_cast<int>(p) - width_);
      if (x > 0) r.neighbors.push_back(static_cast<int>(p) - 1);
      if (x + 1 < width_) r.neighbors.push_back(static_cast<int>(p) + 1);
      if (y + 1 < height_) r.neighbors.push_back(static_cast<int>(p) + width_);
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < n; ++i) init(i);
    } else {
      for (std::int64_t i = 0; i < n; ++i) init(i);
    }

    // Right and down edges of every pixel.
    std::vector<HeapEntry> entries(2 * video.pixel_count());
    std::vector<std::uint8_t> used(entries.size(), 0);
    auto edge = [&](std::int64_t i) {
      const auto p = static_cast<int>(i);
      const int x = p % width_, y = p / width_;
      if (x + 1 < width_) {
        entries[2 * i] = entry(p, p + 1);
        used[2 * i] = 1;
      }
      if (y + 1 < height_) {
        entries[2 * i + 1] = entry(p, p + width_);
        used[2 * i + 1] = 1;
      }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < n; ++i) edge(i);
    } else {
      for (std::int64_t i = 0; i < n; ++i) edge(i);
    }
    std::vector<HeapEntry> live;
    live.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (used[i]) live.push_back(entries[i]);
    }
    heap_ = std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder>(HeapOrder{},
                                                                              std::move(live));
  }

  MergeHierarchy run() {
    std::vector<MergeRecord> log;
    const std::size_t target = regions_.empty() ? 0 : regions_.size() - 1;
    log.reserve(target);
    double threshold = params_.initial_threshold;
    while (log.size() < target) {
      while (!heap_.empty() && !valid(heap_.top())) heap_.pop();
      if (heap_.empty()) break;  // disconnected grid cannot happen on a full frame
      const HeapEntry top = heap_.top();
      if (top.distance > threshold) {
        threshold *= params_.growth;
        continue;
      }
      heap_.pop();
      log.push_back({top.a, top.b, top.distance, threshold});
      merge(top.a, top.b);
    }
    return MergeHierarchy(width_, height_, std::move(log));
  }

 private:
  HeapEntry entry(int a, int b) const {
    if (a > b) std::swap(a, b);
    const RegionState& ra = regions_[a];
    const RegionState& rb = regions_[b];
    return {region_distance(ra.descriptor, ra.histogram, rb.descriptor, rb.histogram, params_), a,
            b, ra.stamp, rb.stamp};
  }

  bool valid(const HeapEntry& e) const {
    const RegionState& ra = regions_[e.a];
    const RegionState& rb = regions_[e.b];
    return ra.alive && rb.alive && ra.stamp == e.stamp_a && rb.stamp == e.stamp_b;
  }

  void merge(int a, int b) {
    RegionState& ra = regions_[a];
    RegionState& rb = regions_[b];
    for (std::size_t i = 0; i < ra.color_sum.size(); ++i) ra.color_sum[i] += rb.color_sum[i];
    ra.area += rb.area;
    ra.histogram += rb.histogram;
    ra.descriptor = full_descriptor(mean_series(ra.color_sum, ra.area), params_.descriptor);
    ra.neighbors = merged_neighbors(ra.neighbors, rb.neighbors, a, b);
    ++ra.stamp;
    rb.alive = false;
    rb.color_sum.clear();
    rb.color_sum.shrink_to_fit();
    rb.neighbors.clear();
    for (int nb : ra.neighbors) {
      auto& list = regions_[nb].neighbors;
      auto it = std::lower_bound(list.begin(), list.end(), b);
      if (it != list.end() && *it == b) list.erase(it);
      it = std::lower_bound(list.begin(), list.end(), a);
      if (it == list.end() || *it != a) list.insert(it, a);
      heap_.push(entry(a, nb));
    }
  }

  const SegmentationParams& params_;
  int width_;
  int height_;
  std::vector<RegionState> regions_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap_;
};

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

double region_distance(const TemporalBinaryPattern& pa, const LabHistogram& ha,
                       const TemporalBinaryPattern& pb, const LabHistogram& hb,
                       const SegmentationParams& params) {
  const double dt = pattern_distance(pa, pb);
  const bool has_appearance = ha.total() > 0.0 && hb.total() > 0.0;
  const double da = has_appearance ? appearance_distance(ha, hb) : 0.0;
  return params.temporal_weight * dt + params.appearance_weight * da;
}

MergeHierarchy segment(const FrameSequence& video, const VisibilityVolume& visibility,
                       const SegmentationParams& params, Execution exec) {
  if (video.frame_count() < 2 || video.pixel_count() == 0) {
    throw DataError("segmentation needs a non-empty video of at least 2 frames");
  }
  if (!visibility.matches(video)) throw DataError("visibility volume does not match the video");
  if (params.initial_threshold <= 0.0 || params.growth <= 1.0) {
    throw UsageError("merge threshold must be positive and growth greater than 1");
  }
  Merger merger(video, visibility, params, exec);
  return merger.run();
}

LabelMap labels_after(const MergeHierarchy& hierarchy, std::size_t merges) {
  if (merges > hierarchy.total_merges()) throw UsageError("more merges requested than recorded");
  const auto n = hierarchy.initial_region_count();
  std::vector<int> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  for (std::size_t m = 0; m < merges; ++m) {
    const auto& rec = hierarchy.merges()[m];
    const int ra = find_root(parent, rec.region_a);
    const int rb = find_root(parent, rec.region_b);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  LabelMap labels(hierarchy.width(), hierarchy.height(), -1);
  std::vector<int> dense(n, -1);
  int next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const int root = find_root(parent, static_cast<int>(p));
    if (dense[root] < 0) dense[root] = next++;
    labels[p] = dense[root];
  }
  return labels;
}

LabelMap level(const MergeHierarchy& hierarchy, double percent) {
  if (!(percent >= 0.0 && percent <= 100.0)) {
    throw UsageError("hierarchy level " + std::to_string(percent) + "% outside [0, 100]");
  }
  const double applied =
      std::floor(percent * static_cast<double>(hierarchy.total_merges()) / 100.0);
  return labels_after(hierarchy, static_cast<std::size_t>(applied));
}

std::vector<PixelSet> regions_of(const LabelMap& labels) {
  int count = 0;
  for (int v : labels) count = std::max(count, v + 1);
  std::vector<PixelSet> out(static_cast<std::size_t>(count));
  for (std::size_t p = 0; p < labels.size(); ++p) out[labels[p]].push_back(p);
  return out;
}

RegionNode make_region_node(PixelSet pixels, const FrameSequence& video,
                            const VisibilityVolume& visibility, const SegmentationParams& params) {
  if (pixels.empty()) throw DataError("region node of an empty pixel set");
  RegionNode node;
  const int n = video.frame_count();
  std::vector<double> sum(3 * static_cast<std::size_t>(n), 0.0);
  for (std::size_t p : pixels) {
    const auto series = pixel_color_series(video, visibility, p);
    for (int f = 0; f < n; ++f) {
      for (int c = 0; c < 3; ++c) sum[3 * f + c] += series[f][c];
    }
  }
  node.mean_color_series = mean_series(sum, pixels.size());
  node.descriptor = full_descriptor(node.mean_color_series, params.descriptor);
  node.histogram = accumulate_histogram(pixels, video, visibility);
  node.pixels = std::move(pixels);
  return node;
}

std::vector<TaggedRegion> regions_at(const MergeHierarchy& hierarchy, const FrameSequence& video,
                                     const VisibilityVolume& visibility,
                                     std::span<const double> percents,
                                     const SegmentationParams& params) {
  std::vector<TaggedRegion> out;
  for (double percent : percents) {
    const auto sets = regions_of(level(hierarchy, percent));
    for (std::size_t label = 0; label < sets.size(); ++label) {
      out.push_back({percent, static_cast<int>(label),
                     make_region_node(sets[label], video, visibility, params)});
    }
  }
  return out;
}

}  // namespace cinemagraph
