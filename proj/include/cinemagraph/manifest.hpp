#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cinemagraph/image.hpp"

namespace cinemagraph {

inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestFile = "cinemagraph.json";

/// Horizontal run of mask pixels: row y, columns [x, x + length).
struct RleRun {
  int y = 0;
  int x = 0;
  int length = 0;
  friend bool operator==(const RleRun&, const RleRun&) = default;
};

std::vector<RleRun> encode_rle(const Mask& mask);
Mask decode_rle(const std::vector<RleRun>& runs, int width, int height);

struct FrameInterval {
  int first = 0;
  int last = 0;
  int length() const { return last - first + 1; }
  friend bool operator==(const FrameInterval&, const FrameInterval&) = default;
};

struct DisplayRegionRecord {
  int id = 0;
  std::size_t pixel_count = 0;
  std::array<int, 4> bbox{};  // min_x, min_y, max_x, max_y
  double gamma = 0.0;
  double lambda = 0.0;
  int rpca_iterations = 0;
  std::vector<int> stabilization_fallback_frames;
  std::vector<RleRun> mask;
  friend bool operator==(const DisplayRegionRecord&, const DisplayRegionRecord&) = default;
};

struct RepetitiveRegionRecord {
  int id = 0;
  std::size_t pixel_count = 0;
  FrameInterval interval;  // most frequent per-pixel best interval
  double max_score = 0.0;
  std::vector<RleRun> mask;
  friend bool operator==(const RepetitiveRegionRecord&, const RepetitiveRegionRecord&) = default;
};

struct RepetitiveRecord {
  std::size_t pixel_count = 0;
  std::optional<FrameInterval> interval;
  std::vector<RepetitiveRegionRecord> regions;
  friend bool operator==(const RepetitiveRecord&, const RepetitiveRecord&) = default;
};

struct DroppedComponent {
  std::size_t pixel_count = 0;
  std::string reason;
  friend bool operator==(const DroppedComponent&, const DroppedComponent&) = default;
};

/// Pipeline record written next to the output frames as cinemagraph.json.
/// Schema: docs/manifest.md.
struct Manifest {
  int version = kManifestVersion;
  int width = 0;
  int height = 0;
  int frame_count = 0;
  int reference_index = 0;
  int loop_length = 0;
  std::vector<DisplayRegionRecord> display_regions;
  RepetitiveRecord repetitive;
  std::vector<double> lambda_per_segment;
  std::vector<DroppedComponent> dropped_components;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> config;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

std::string manifest_to_string(const Manifest& manifest);
Manifest manifest_from_string(const std::string& text);
Manifest read_manifest(const std::filesystem::path& file);

/// Writes the numbered output frames and the manifest. Throws DataError on an
/// empty sequence and std::filesystem::filesystem_error / DataError on I/O
/// failure.
void write_output(const FrameSequence& sequence, const Manifest& manifest,
                  const std::filesystem::path& directory);

}  // namespace cinemagraph
