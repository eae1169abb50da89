#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "cinemagraph/image.hpp"

namespace cinemagraph {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Positions on consecutive frames starting at start_frame.
struct FeatureTrack {
  int start_frame = 0;
  std::vector<Point2> positions;

  int end_frame() const { return start_frame + static_cast<int>(positions.size()) - 1; }
  bool covers(int f) const { return f >= start_frame && f <= end_frame(); }
  const Point2& at(int f) const { return positions[static_cast<std::size_t>(f - start_frame)]; }
  friend bool operator==(const FeatureTrack&, const FeatureTrack&) = default;
};

struct TrackerParams {
  int max_corners = 200;
  double quality_level = 0.01;
  double min_distance = 5.0;
  int window = 21;
  int pyramid_levels = 3;
  int iterations = 10;
  double max_error = 30.0;
};

/// Shi-Tomasi corners inside the region on the reference frame, tracked
/// forward and backward with pyramidal Lucas-Kanade. A track ends when the
/// tracker loses the point or it leaves the frame.
std::vector<FeatureTrack> track_features(const FrameSequence& video, const PixelSet& region,
                                         const TrackerParams& params = {});

struct TrackFilter {
  int min_length = 10;
  double max_stddev = 2.0;
};

/// Keeps tracks of at least min_length frames whose population standard
/// deviation is below max_stddev in both x and y.
std::vector<FeatureTrack> filter_tracks(const std::vector<FeatureTrack>& tracks,
                                        const TrackFilter& filter = {});

/// One line per track: start_frame followed by x y pairs, whitespace separated.
void write_tracks(std::ostream& out, const std::vector<FeatureTrack>& tracks);
std::vector<FeatureTrack> read_tracks(std::istream& in);
std::vector<FeatureTrack> load_tracks(const std::filesystem::path& file);

}  // namespace cinemagraph
