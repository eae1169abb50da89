#pragma once

// Slow, direct reference implementations used to cross-check the library.

#include <cstdint>
#include <vector>

#include "cinemagraph/image.hpp"
#include "cinemagraph/manifest.hpp"

namespace oracle {

/// All i >= 0 with alpha * i + beta <= n - 1, by enumeration.
std::vector<int> pattern_indices(int n, int alpha, int beta);

/// Change bits of a color series, straight from the definition.
std::vector<bool> change_bits(const std::vector<cinemagraph::RgbF>& series, int alpha, int beta,
                              double theta);

struct Merge {
  int a = 0;
  int b = 0;
  double distance = 0.0;
  double threshold = 0.0;
};

struct GreedyParams {
  double initial_threshold = 0.2;
  double growth = 1.5;
  double appearance_weight = 0.1;
  double temporal_weight = 1.0;
  int alpha1 = 4, beta1 = 4, alpha2 = 2;
  double theta = 100.0;
};

/// Recomputes every adjacent region pair's distance from scratch before each
/// merge and takes the smallest (distance, a, b).
std::vector<Merge> greedy_merges(const cinemagraph::FrameSequence& video,
                                 const cinemagraph::VisibilityVolume& visibility,
                                 const GreedyParams& params = {});

/// |X_k|, k = 1..floor(M/2), of the mean-removed series by the textbook sum.
std::vector<double> dft_magnitudes(const std::vector<double>& series);

/// max_{k > tau} |X_k| / max_{k <= tau} |X_k|.
double crep_ratio(const std::vector<double>& series, int tau);

struct CrepBest {
  double score = 0.0;
  cinemagraph::FrameInterval interval;
};

/// Exhaustive search over every interval of at least floor(N/2) frames.
CrepBest crep_exhaustive(const std::vector<double>& series, int tau);

}  // namespace oracle
