#include "cinemagraph/repetitive.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "cinemagraph/color.hpp"
#include "cinemagraph/errors.hpp"
#include "cinemagraph/temporal_features.hpp"

namespace cinemagraph {

namespace {

struct Twiddles {
  std::vector<double> cos;
  std::vector<double> sin;
};

// Tables are built per thread so every call with the same length performs
// the same floating-point operations.
const Twiddles& twiddles(std::size_t m) {
  thread_local std::map<std::size_t, Twiddles> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  Twiddles t;
  t.cos.resize(m);
  t.sin.resize(m);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  for (std::size_t i = 0; i < m; ++i) {
    const double angle = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
    t.cos[i] = std::cos(angle);
    t.sin[i] = std::sin(angle);
  }
  return cache.emplace(m, std::move(t)).first->second;
}

void magnitudes_into(std::span<const double> series, std::vector<double>& centered,
                     std::vector<double>& out) {
  const std::size_t m = series.size();
  double sum = 0.0;
  for (double v : series) sum += v;
  const double mean = sum / static_cast<double>(m);
  centered.resize(m);
  for (std::size_t t = 0; t < m; ++t) centered[t] = series[t] - mean;
  const Twiddles& tw = twiddles(m);
  out.resize(m / 2);
  for (std::size_t k = 1; k <= m / 2; ++k) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < m; ++t) {
      re += centered[t] * tw.cos[idx];
      im -= centered[t] * tw.sin[idx];
      idx += k;
      if (idx >= m) idx -= m;
    }
    out[k - 1] = std::sqrt(re * re + im * im);
  }
}

double ratio_from_magnitudes(const std::vector<double>& mags, int tau) {
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

}  // namespace

std::vector<double> dft_magnitudes(std::span<const double> series) {
  if (series.size() < 2) throw DataError("DFT needs at least 2 samples");
  std::vector<double> centered, out;
  magnitudes_into(series, centered, out);
  return out;
}

double crep_interval(std::span<const double> series, int first, int last, int tau) {
  if (tau < 1) throw UsageError("tau must be at least 1");
  if (first < 0 || last >= static_cast<int>(series.size()) || last - first < 2) {
    throw DataError("invalid interval [" + std::to_string(first) + ", " + std::to_string(last) +
                    "]");
  }
  const int length = last - first + 1;
  if (!interval_supports_tau(length, tau)) {
    throw DataError("interval of " + std::to_string(length) + " frames has no bin above tau=" +
                    std::to_string(tau));
  }
  thread_local std::vector<double> centered, mags;
  magnitudes_into(series.subspan(static_cast<std::size_t>(first), static_cast<std::size_t>(length)),
                  centered, mags);
  return ratio_from_magnitudes(mags, tau);
}

CrepResult crep(std::span<const double> series, int stride, int tau) {
  const int n = static_cast<int>(series.size());
  if (stride < 1) throw UsageError("interval stride must be at least 1");
  if (n < 2) throw DataError("series too short for interval search");
  std::vector<int> ends;
  for (int e = 0; e < n; e += stride) ends.push_back(e);
  if (ends.back() != n - 1) ends.push_back(n - 1);
  const int min_length = n / 2;
  CrepResult best{-1.0, {0, n - 1}};
  for (std::size_t a = 0; a < ends.size(); ++a) {
    for (std::size_t b = a + 1; b < ends.size(); ++b) {
      const int i = ends[a], j = ends[b];
      const int length = j - i + 1;
      if (length < min_length || length < 3 || !interval_supports_tau(length, tau)) continue;
      const double score = crep_interval(series, i, j, tau);
      if (score > best.score) best = {score, {i, j}};
    }
  }
  if (best.score < 0.0) best = {0.0, {0, n - 1}};
  return best;
}

double percentile_nearest_rank(std::span<const double> values, double percent) {
  if (values.empty()) throw DataError("percentile of an empty series");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

bool passes_gates(double score, double percentile_luma, const RepetitiveParams& params) {
  return score > params.score_gate && percentile_luma > params.luma_gate;
}

std::vector<double> luma_series(const FrameSequence& video, const VisibilityVolume& visibility,
                                std::size_t pixel) {
  const int n = video.frame_count();
  std::vector<double> series(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> vis(static_cast<std::size_t>(n));
  bool all_visible = true;
  for (int f = 0; f < n; ++f) {
    series[f] = luma(video.frame(f).at(pixel));
    vis[f] = visibility.visible(pixel, f) ? 1 : 0;
    all_visible = all_visible && vis[f];
  }
  if (all_visible) return series;
  return fill_invisible<double>(series, vis);
}

RepetitiveField repetitive_mask(const FrameSequence& video, const VisibilityVolume& visibility,
                                const RepetitiveParams& params, Execution exec) {
  if (video.frame_count() < 8) throw DataError("repetitive detection needs at least 8 frames");
  if (!visibility.matches(video)) throw DataError("visibility volume does not match the video");
  const int w = video.width(), h = video.height();
  RepetitiveField field{Grid<double>(w, h, 0.0), Grid<FrameInterval>(w, h),
                        Grid<double>(w, h, 0.0), Mask(w, h, 0)};
  const auto n = static_cast<std::int64_t>(video.pixel_count());
  auto body = [&](std::int64_t i) {
    const auto p = static_cast<std::size_t>(i);
    const auto series = luma_series(video, visibility, p);
    const CrepResult r = crep(series, params.stride, params.tau);
    const double pct = percentile_nearest_rank(series, params.luma_percentile);
    field.score[p] = r.score;
    field.best_interval[p] = r.interval;
    field.percentile_luma[p] = pct;
    field.mask[p] = passes_gates(r.score, pct, params) ? 1 : 0;
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  return field;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T field_value(std::string_view text, int line_no) {
  T out{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("repetitive field line " + std::to_string(line_no) + ": bad value '" +
                    std::string(text) + "'");
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    parts.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

void write_repetitive_field(std::ostream& out, const RepetitiveField& field) {
  const int w = field.mask.width(), h = field.mask.height();
  out << w << ',' << h << '\n';
  for (std::size_t p = 0; p < field.mask.size(); ++p) {
    out << shortest(field.score[p]) << ',' << field.best_interval[p].first << ','
        << field.best_interval[p].last << ',' << shortest(field.percentile_luma[p]) << ','
        << (field.mask[p] ? 1 : 0) << '\n';
  }
}

RepetitiveField read_repetitive_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("repetitive field is empty");
  const auto head = split(line);
  if (head.size() != 2) throw DataError("repetitive field header must be width,height");
  const int w = field_value<int>(head[0], 1), h = field_value<int>(head[1], 1);
  if (w <= 0 || h <= 0) throw DataError("repetitive field has a non-positive size");
  RepetitiveField field{Grid<double>(w, h), Grid<FrameInterval>(w, h), Grid<double>(w, h),
                        Mask(w, h)};
  const std::size_t n = field.mask.size();
  for (std::size_t p = 0; p < n; ++p) {
    const int line_no = static_cast<int>(p) + 2;
    if (!std::getline(in, line)) {
      throw DataError("repetitive field ends after " + std::to_string(p) + " of " +
                      std::to_string(n) + " pixels");
    }
    const auto parts = split(line);
    if (parts.size() != 5) {
      throw DataError("repetitive field line " + std::to_string(line_no) + ": expected 5 values");
    }
    field.score[p] = field_value<double>(parts[0], line_no);
    field.best_interval[p] = {field_value<int>(parts[1], line_no),
                              field_value<int>(parts[2], line_no)};
    field.percentile_luma[p] = field_value<double>(parts[3], line_no);
    field.mask[p] = field_value<int>(parts[4], line_no) != 0 ? 1 : 0;
  }
  return field;
}

}  // namespace cinemagraph
