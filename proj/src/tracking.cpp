#include "cinemagraph/tracking.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <opencv2/imgproc.hpp>
#include <opencv2/video/tracking.hpp>

#include "cinemagraph/color.hpp"
#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

cv::Mat gray_of(const Image& image) {
  cv::Mat gray(image.height(), image.width(), CV_8UC1);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = gray.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width(); ++x) row[x] = luma(image.at(x, y));
  }
  return gray;
}

bool inside(const cv::Point2f& p, int w, int h) {
  return p.x >= 0.0f && p.y >= 0.0f && p.x <= w - 1.0f && p.y <= h - 1.0f;
}

/// Follows `start` from frame `from` in direction `step` (+1 / -1); returns
/// the positions on the frames after `from`, in visiting order, per point.
std::vector<std::vector<Point2>> follow(const std::vector<cv::Mat>& gray,
                                        const std::vector<cv::Point2f>& start, int from, int step,
                                        const TrackerParams& params) {
  std::vector<std::vector<Point2>> paths(start.size());
  std::vector<cv::Point2f> current = start;
  std::vector<int> alive(start.size());
  for (std::size_t i = 0; i < start.size(); ++i) alive[i] = static_cast<int>(i);
  const cv::TermCriteria criteria(cv::TermCriteria::COUNT | cv::TermCriteria::EPS,
                                  params.iterations, 0.01);
  const int w = gray.front().cols, h = gray.front().rows;
  for (int f = from + step; f >= 0 && f < static_cast<int>(gray.size()) && !alive.empty();
       f += step) {
    std::vector<cv::Point2f> next;
    std::vector<std::uint8_t> status;
    std::vector<float> error;
    cv::calcOpticalFlowPyrLK(gray[f - step], gray[f], current, next, status, error,
                             cv::Size(params.window, params.window), params.pyramid_levels - 1,
                             criteria);
    std::vector<cv::Point2f> kept_points;
    std::vector<int> kept_ids;
    for (std::size_t k = 0; k < next.size(); ++k) {
      if (!status[k] || !inside(next[k], w, h) || !(error[k] <= params.max_error)) continue;
      paths[alive[k]].push_back({next[k].x, next[k].y});
      kept_points.push_back(next[k]);
      kept_ids.push_back(alive[k]);
    }
    current = std::move(kept_points);
    alive = std::move(kept_ids);
  }
  return paths;
}

}  // namespace

std::vector<FeatureTrack> track_features(const FrameSequence& video, const PixelSet& region,
                                         const TrackerParams& params) {
  const int w = video.width(), h = video.height();
  cv::Mat mask = cv::Mat::zeros(h, w, CV_8UC1);
  for (std::size_t p : region) mask.at<std::uint8_t>(static_cast<int>(p / w), static_cast<int>(p % w)) = 255;
  std::vector<cv::Mat> gray;
  gray.reserve(static_cast<std::size_t>(video.frame_count()));
  for (const auto& f : video.frames()) gray.push_back(gray_of(f));

  const int ref = video.reference_index();
  std::vector<cv::Point2f> corners;
  cv::goodFeaturesToTrack(gray[ref], corners, params.max_corners, params.quality_level,
                          params.min_distance, mask, 3, false);
  if (corners.empty()) return {};

  const auto forward = follow(gray, corners, ref, +1, params);
  const auto backward = follow(gray, corners, ref, -1, params);
  std::vector<FeatureTrack> tracks;
  tracks.reserve(corners.size());
  for (std::size_t i = 0; i < corners.size(); ++i) {
    FeatureTrack t;
    t.start_frame = ref - static_cast<int>(backward[i].size());
    for (auto it = backward[i].rbegin(); it != backward[i].rend(); ++it) t.positions.push_back(*it);
    t.positions.push_back({corners[i].x, corners[i].y});
    t.positions.insert(t.positions.end(), forward[i].begin(), forward[i].end());
    tracks.push_back(std::move(t));
  }
  return tracks;
}

std::vector<FeatureTrack> filter_tracks(const std::vector<FeatureTrack>& tracks,
                                        const TrackFilter& filter) {
  std::vector<FeatureTrack> kept;
  for (const auto& t : tracks) {
    if (static_cast<int>(t.positions.size()) < filter.min_length) continue;
    const double n = static_cast<double>(t.positions.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : t.positions) {
      mx += p.x;
      my += p.y;
    }
    mx /= n;
    my /= n;
    double vx = 0.0, vy = 0.0;
    for (const auto& p : t.positions) {
      vx += (p.x - mx) * (p.x - mx);
      vy += (p.y - my) * (p.y - my);
    }
    if (std::sqrt(vx / n) < filter.max_stddev && std::sqrt(vy / n) < filter.max_stddev) {
      kept.push_back(t);
    }
  }
  return kept;
}

void write_tracks(std::ostream& out, const std::vector<FeatureTrack>& tracks) {
  out.precision(17);
  for (const auto& t : tracks) {
    out << t.start_frame;
    for (const auto& p : t.positions) out << ' ' << p.x << ' ' << p.y;
    out << '\n';
  }
}

std::vector<FeatureTrack> read_tracks(std::istream& in) {
  std::vector<FeatureTrack> tracks;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream row(line);
    FeatureTrack t;
    if (!(row >> t.start_frame) || t.start_frame < 0) {
      throw DataError("track file line " + std::to_string(line_no) + ": bad start frame");
    }
    double x = 0.0, y = 0.0;
    while (row >> x) {
      if (!(row >> y)) {
        throw DataError("track file line " + std::to_string(line_no) + ": odd coordinate count");
      }
      t.positions.push_back({x, y});
    }
    if (!row.eof()) throw DataError("track file line " + std::to_string(line_no) + ": not a number");
    if (t.positions.empty()) {
      throw DataError("track file line " + std::to_string(line_no) + ": track has no positions");
    }
    tracks.push_back(std::move(t));
  }
  return tracks;
}

std::vector<FeatureTrack> load_tracks(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open track file " + file.string());
  return read_tracks(in);
}

}  // namespace cinemagraph
