#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "cinemagraph/codebook.hpp"
#include "cinemagraph/config.hpp"
#include "cinemagraph/manifest.hpp"
#include "cinemagraph/random_forest.hpp"
#include "cinemagraph/repetitive.hpp"
#include "cinemagraph/tracking.hpp"

namespace cinemagraph {

/// Failure of one pipeline stage, carrying the CLI exit code it maps to.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message, std::string hint, int exit_code);

  const std::string& stage() const { return stage_; }
  const std::string& hint() const { return hint_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string stage_;
  std::string hint_;
  int exit_code_;
};

struct PipelineInputs {
  const FrameSequence* video = nullptr;
  const VisibilityVolume* visibility = nullptr;
  /// Both required unless classification is disabled.
  const ForestModel* model = nullptr;
  const Hog3dCodebook* codebook = nullptr;
  /// Optional externally supplied tracks (replaces the tracker).
  const std::vector<FeatureTrack>* tracks = nullptr;
  /// Precomputed display mask; replaces segmentation and classification.
  const Mask* display_mask = nullptr;
  /// Precomputed repetitive field; replaces the detector.
  const RepetitiveField* repetitive_field = nullptr;
  bool display = true;
  bool repetitive = true;
  PipelineConfig config;
  Execution exec = Execution::parallel;
};

struct PipelineResult {
  FrameSequence output;
  Manifest manifest;
  MergeHierarchy hierarchy;
  RepetitiveField repetitive;
  /// Per display region: RPCA traces for diagnostics.
  std::vector<RegularizedSegment> regularized;
};

/// Segmentation -> classification -> repetitive detection -> rendering.
/// Stage failures surface as StageError.
PipelineResult run_pipeline(const PipelineInputs& inputs);

struct PipelineFiles {
  std::filesystem::path input_dir;
  std::optional<std::filesystem::path> visibility_dir;
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> codebook;
  std::optional<std::filesystem::path> tracks;
  std::optional<int> reference_index;
  bool display = true;
  bool repetitive = true;
  bool export_levels = false;
  bool export_diagnostics = false;
  PipelineConfig config;
  Execution exec = Execution::parallel;
};

/// Loads inputs, runs the pipeline and writes frames, manifest and optional
/// diagnostics into output_dir.
PipelineResult run_pipeline(const PipelineFiles& files);

/// Writes per-level label maps (level_060.png ...) as 16-bit gray images.
void export_levels(const std::filesystem::path& directory, const MergeHierarchy& hierarchy,
                   std::span<const double> levels);

}  // namespace cinemagraph
