#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "cinemagraph/color.hpp"

namespace oracle {

using cinemagraph::FrameSequence;
using cinemagraph::RgbF;
using cinemagraph::VisibilityVolume;

std::vector<int> pattern_indices(int n, int alpha, int beta) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (alpha * i + beta <= n - 1) out.push_back(i);
  }
  return out;
}

std::vector<bool> change_bits(const std::vector<RgbF>& series, int alpha, int beta, double theta) {
  std::vector<bool> bits;
  for (int i : pattern_indices(static_cast<int>(series.size()), alpha, beta)) {
    const RgbF& a = series[static_cast<std::size_t>(alpha * i)];
    const RgbF& b = series[static_cast<std::size_t>(alpha * i + beta)];
    const double d0 = b[0] - a[0], d1 = b[1] - a[1], d2 = b[2] - a[2];
    bits.push_back(d0 * d0 + d1 * d1 + d2 * d2 > theta * theta);
  }
  return bits;
}

namespace {

std::vector<RgbF> filled_series(const FrameSequence& video, const VisibilityVolume& vis,
                                std::size_t p) {
  const int n = video.frame_count();
  std::vector<RgbF> raw(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) {
    const auto c = video.frame(f).at(p);
    raw[f] = {double(c[0]), double(c[1]), double(c[2])};
  }
  std::vector<RgbF> out = raw;
  for (int f = 0; f < n; ++f) {
    if (vis.visible(p, f)) continue;
    for (int d = 1; d < n; ++d) {
      if (f - d >= 0 && vis.visible(p, f - d)) {
        out[f] = raw[f - d];
        break;
      }
      if (f + d < n && vis.visible(p, f + d)) {
        out[f] = raw[f + d];
        break;
      }
    }
  }
  return out;
}

int bin_of(double v, double lo, double hi) {
  int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * 8));
  return std::clamp(b, 0, 7);
}

struct Region {
  std::vector<bool> bits;
  std::vector<double> hist;  // 24 bins
};

}  // namespace

std::vector<Merge> greedy_merges(const FrameSequence& video, const VisibilityVolume& vis,
                                 const GreedyParams& params) {
  const int w = video.width(), h = video.height(), n = video.frame_count();
  const std::size_t hw = video.pixel_count();
  std::vector<std::vector<RgbF>> series(hw);
  for (std::size_t p = 0; p < hw; ++p) series[p] = filled_series(video, vis, p);
  std::vector<int> label(hw);
  for (std::size_t p = 0; p < hw; ++p) label[p] = static_cast<int>(p);

  auto describe = [&](int id) {
    std::vector<double> sum(3 * static_cast<std::size_t>(n), 0.0);
    std::size_t count = 0;
    Region r;
    r.hist.assign(24, 0.0);
    for (std::size_t p = 0; p < hw; ++p) {
      if (label[p] != id) continue;
      ++count;
      for (int f = 0; f < n; ++f) {
        for (int c = 0; c < 3; ++c) sum[3 * f + c] += series[p][f][c];
        if (!vis.visible(p, f)) continue;
        const auto lab = cinemagraph::rgb_to_lab(video.frame(f).at(p));
        r.hist[bin_of(lab.L, 0, 100)] += 1;
        r.hist[8 + bin_of(lab.a, -128, 128)] += 1;
        r.hist[16 + bin_of(lab.b, -128, 128)] += 1;
      }
    }
    std::vector<RgbF> mean(static_cast<std::size_t>(n));
    for (int f = 0; f < n; ++f) {
      for (int c = 0; c < 3; ++c) mean[f][c] = sum[3 * f + c] / static_cast<double>(count);
    }
    r.bits = change_bits(mean, params.alpha1, params.beta1, params.theta);
    const auto second = change_bits(mean, params.alpha2, n / 2, params.theta);
    r.bits.insert(r.bits.end(), second.begin(), second.end());
    return r;
  };

  auto distance = [&](const Region& x, const Region& y) {
    std::size_t diff = 0;
    for (std::size_t i = 0; i < x.bits.size(); ++i) diff += x.bits[i] != y.bits[i];
    const double dt = x.bits.empty() ? 0.0 : double(diff) / double(x.bits.size());
    double tx = 0, ty = 0;
    for (int i = 0; i < 8; ++i) {
      tx += x.hist[i];
      ty += y.hist[i];
    }
    double da = 0.0;
    if (tx > 0 && ty > 0) {
      double dot = 0, n1 = 0, n2 = 0;
      for (int i = 0; i < 24; ++i) {
        dot += x.hist[i] * y.hist[i];
        n1 += x.hist[i] * x.hist[i];
        n2 += y.hist[i] * y.hist[i];
      }
      da = 1.0 - dot / (std::sqrt(n1) * std::sqrt(n2));
    }
    return params.temporal_weight * dt + params.appearance_weight * da;
  };

  std::vector<Merge> log;
  double threshold = params.initial_threshold;
  while (log.size() + 1 < hw) {
    std::set<std::pair<int, int>> pairs;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int p = y * w + x;
        if (x + 1 < w && label[p] != label[p + 1]) {
          pairs.insert({std::min(label[p], label[p + 1]), std::max(label[p], label[p + 1])});
        }
        if (y + 1 < h && label[p] != label[p + w]) {
          pairs.insert({std::min(label[p], label[p + w]), std::max(label[p], label[p + w])});
        }
      }
    }
    std::map<int, Region> regions;
    for (const auto& [a, b] : pairs) {
      if (!regions.count(a)) regions[a] = describe(a);
      if (!regions.count(b)) regions[b] = describe(b);
    }
    std::tuple<double, int, int> best{std::numeric_limits<double>::infinity(), 0, 0};
    for (const auto& [a, b] : pairs) {
      best = std::min(best, std::tuple<double, int, int>{distance(regions[a], regions[b]), a, b});
    }
    const auto [d, a, b] = best;
    while (d > threshold) threshold *= params.growth;
    log.push_back({a, b, d, threshold});
    for (auto& l : label) {
      if (l == b) l = a;
    }
  }
  return log;
}

std::vector<double> dft_magnitudes(const std::vector<double>& series) {
  const std::size_t m = series.size();
  double sum = 0.0;
  for (double v : series) sum += v;
  const double mean = sum / static_cast<double>(m);
  std::vector<double> out;
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  for (std::size_t k = 1; k <= m / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      const double angle = kTwoPi * static_cast<double>((k * t) % m) / static_cast<double>(m);
      re += (series[t] - mean) * std::cos(angle);
      im -= (series[t] - mean) * std::sin(angle);
    }
    out.push_back(std::sqrt(re * re + im * im));
  }
  return out;
}

double crep_ratio(const std::vector<double>& series, int tau) {
  const auto mags = dft_magnitudes(series);
  double low = 0.0, high = 0.0;
  for (std::size_t k = 1; k <= mags.size(); ++k) {
    if (static_cast<int>(k) <= tau) {
      low = std::max(low, mags[k - 1]);
    } else {
      high = std::max(high, mags[k - 1]);
    }
  }
  if (low == 0.0) return high > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return high / low;
}

CrepBest crep_exhaustive(const std::vector<double>& series, int tau) {
  const int n = static_cast<int>(series.size());
  CrepBest best{-1.0, {0, n - 1}};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int len = j - i + 1;
      if (len < n / 2 || len / 2 <= tau) continue;
      const std::vector<double> part(series.begin() + i, series.begin() + j + 1);
      const double s = crep_ratio(part, tau);
      if (s > best.score) best = {s, {i, j}};
    }
  }
  if (best.score < 0.0) best = {0.0, {0, n - 1}};
  return best;
}

}  // namespace oracle
