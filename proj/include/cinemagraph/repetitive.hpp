#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cinemagraph/image.hpp"
#include "cinemagraph/manifest.hpp"
#include "cinemagraph/parallel.hpp"

namespace cinemagraph {

/// |F_k| for k = 1 .. floor(M/2) of the mean-removed series.
/// Throws DataError when M < 2.
std::vector<double> dft_magnitudes(std::span<const double> series);

/// Ratio of the strongest bin above tau to the strongest bin in [1, tau] over
/// series[first..last] (inclusive). A zero denominator yields +inf when the
/// numerator is positive and 0 otherwise. Throws DataError when the interval
/// has no bin above tau.
double crep_interval(std::span<const double> series, int first, int last, int tau = 4);

/// Whether an interval of `length` frames has at least one bin above tau.
inline bool interval_supports_tau(int length, int tau) { return length / 2 > tau; }

struct CrepResult {
  double score = 0.0;
  FrameInterval interval;
};

/// Best crep_interval over intervals of at least floor(N/2) frames whose
/// endpoints are multiples of `stride` or the extremes {0, N-1}. Intervals
/// too short for tau are skipped. The first maximum in (first, last) order
/// wins. stride = 1 is the exhaustive search.
CrepResult crep(std::span<const double> series, int stride = 8, int tau = 4);

/// Nearest-rank percentile (rank = ceil(p/100 * n)).
double percentile_nearest_rank(std::span<const double> values, double percent);

struct RepetitiveParams {
  int tau = 4;
  int stride = 8;
  double score_gate = 2.5;
  double luma_gate = 127.0;
  double luma_percentile = 80.0;
};

/// score > score_gate and percentile luma > luma_gate.
bool passes_gates(double score, double percentile_luma, const RepetitiveParams& params = {});

struct RepetitiveField {
  Grid<double> score;
  Grid<FrameInterval> best_interval;
  Grid<double> percentile_luma;
  Mask mask;
};

/// Luma series of one pixel with invisible frames filled from the nearest
/// visible frame.
std::vector<double> luma_series(const FrameSequence& video, const VisibilityVolume& visibility,
                                std::size_t pixel);

/// Per-pixel repetitiveness over the whole frame. Throws DataError when N < 8.
RepetitiveField repetitive_mask(const FrameSequence& video, const VisibilityVolume& visibility,
                                const RepetitiveParams& params = {},
                                Execution exec = Execution::parallel);

/// CSV with a `width,height` header line, then one row per pixel in raster
/// order: score,first,last,percentile_luma,mask. Scores round-trip exactly;
/// infinite scores are written as inf.
void write_repetitive_field(std::ostream& out, const RepetitiveField& field);
RepetitiveField read_repetitive_field(std::istream& in);

}  // namespace cinemagraph
