#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cinemagraph/display_classifier.hpp"
#include "cinemagraph/random_forest.hpp"
#include "cinemagraph/render.hpp"
#include "cinemagraph/repetitive.hpp"
#include "cinemagraph/segmentation.hpp"

namespace cinemagraph {

/// Every tunable of the pipeline. Field names double as config-file keys.
struct PipelineConfig {
  double theta = 100.0;
  int alpha1 = 4;
  int beta1 = 4;
  int alpha2 = 2;
  double init_threshold = 0.2;
  double growth = 1.5;
  double appearance_weight = 0.1;
  double temporal_weight = 1.0;
  std::vector<double> levels{60.0, 70.0, 80.0};
  int tau = 4;
  double crep_gate = 2.5;
  double luma_gate = 127.0;
  int crep_stride = 8;
  int min_segment_px = 50;
  double max_segment_frac = 0.30;
  double positive_overlap = 0.8;
  int n_trees = 100;
  int max_depth = 10;
  int codebook_k = 100;
  double lambda_base = 0.005;
  double lambda_slope = 0.015;
  double rpca_tol = 1e-7;
  int rpca_max_iter = 500;
  int min_track_length = 10;
  double max_track_stddev = 2.0;
  int feather_px = 2;
  std::uint64_t seed = 0;

  /// Throws UsageError naming the first out-of-range field.
  void validate() const;

  SegmentationParams segmentation() const;
  RepetitiveParams repetitive() const;
  SelectionParams selection() const;
  ForestParams forest() const;
  RegularizeParams regularize() const;
};

/// Sets one field from its textual value. Unknown keys and malformed values
/// throw UsageError.
void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value);

/// Flat key=value lines; '#' starts a comment; blank lines ignored.
void apply_config_text(PipelineConfig& config, const std::string& text);
void apply_config_file(PipelineConfig& config, const std::filesystem::path& file);

/// Canonical key -> value text for every field, in a stable order.
std::map<std::string, std::string> config_to_map(const PipelineConfig& config);
std::string config_to_text(const PipelineConfig& config);

}  // namespace cinemagraph
