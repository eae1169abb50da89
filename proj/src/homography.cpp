#include "cinemagraph/homography.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

/// Similarity moving the centroid to the origin with mean distance sqrt(2).
Eigen::Matrix3d normalizer(std::span<const Point2> pts) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double mean = 0.0;
  for (const auto& p : pts) mean += std::hypot(p.x - cx, p.y - cy);
  mean /= static_cast<double>(pts.size());
  if (mean <= 0.0) throw NumericalError("homography points are all coincident");
  const double s = std::sqrt(2.0) / mean;
  Eigen::Matrix3d t;
  t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
  return t;
}

double sample(const Image& img, double x, double y, int c) {
  x = std::clamp(x, 0.0, img.width() - 1.0);
  y = std::clamp(y, 0.0, img.height() - 1.0);
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1), y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0, fy = y - y0;
  const double top = (1 - fx) * img.at(x0, y0)[c] + fx * img.at(x1, y0)[c];
  const double bottom = (1 - fx) * img.at(x0, y1)[c] + fx * img.at(x1, y1)[c];
  return (1 - fy) * top + fy * bottom;
}

}  // namespace

Homography fit_homography(std::span<const Point2> src, std::span<const Point2> dst) {
  if (src.size() != dst.size()) throw DataError("homography point lists differ in length");
  if (src.size() < 4) {
    throw DataError("homography needs at least 4 correspondences, got " + std::to_string(src.size()));
  }
  const Eigen::Matrix3d ts = normalizer(src);
  const Eigen::Matrix3d td = normalizer(dst);
  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d p = ts * Eigen::Vector3d(src[i].x, src[i].y, 1.0);
    const Eigen::Vector3d q = td * Eigen::Vector3d(dst[i].x, dst[i].y, 1.0);
    const double x = p.x(), y = p.y(), u = q.x(), v = q.y();
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() < 8 || s(7) <= 1e-10 * s(0)) {
    throw NumericalError("homography system is rank deficient (degenerate point configuration)");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Homography out = td.inverse() * hn * ts;
  if (std::abs(out(2, 2)) < 1e-12) throw NumericalError("homography maps the origin to infinity");
  out /= out(2, 2);
  return out;
}

Point2 apply_homography(const Homography& h, const Point2& p) {
  const Eigen::Vector3d q = h * Eigen::Vector3d(p.x, p.y, 1.0);
  return {q.x() / q.z(), q.y() / q.z()};
}

Image warp_to_reference(const Image& frame, const Homography& frame_to_reference) {
  const Homography inv = frame_to_reference.inverse();
  Image out(frame.width(), frame.height());
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const Point2 s = apply_homography(inv, {double(x), double(y)});
      Rgb c{};
      for (int ch = 0; ch < 3; ++ch) {
        c[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(sample(frame, s.x, s.y, ch)), 0L, 255L));
      }
      out.set(x, y, c);
    }
  }
  return out;
}

StabilizationResult stabilize(const FrameSequence& video, const std::vector<FeatureTrack>& tracks) {
  StabilizationResult result{video, {}, {}};
  const int ref = video.reference_index();
  result.homographies.assign(static_cast<std::size_t>(video.frame_count()), Homography::Identity());
  for (int f = 0; f < video.frame_count(); ++f) {
    if (f == ref) continue;
    std::vector<Point2> src, dst;
    for (const auto& t : tracks) {
      if (t.covers(f) && t.covers(ref)) {
        src.push_back(t.at(f));
        dst.push_back(t.at(ref));
      }
    }
    if (src.size() < 4) {
      result.fallback_frames.push_back(f);
      continue;
    }
    try {
      result.homographies[f] = fit_homography(src, dst);
    } catch (const NumericalError&) {
      result.fallback_frames.push_back(f);
      continue;
    }
    result.video.frame(f) = warp_to_reference(video.frame(f), result.homographies[f]);
  }
  return result;
}

StabilizationResult stabilize(const FrameSequence& video, const PixelSet& region,
                              const TrackerParams& tracker, const TrackFilter& filter) {
  return stabilize(video, filter_tracks(track_features(video, region, tracker), filter));
}

}  // namespace cinemagraph
