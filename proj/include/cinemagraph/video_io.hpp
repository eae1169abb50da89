#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "cinemagraph/image.hpp"

namespace cinemagraph {

inline constexpr std::string_view kFramePattern = "frame_%06d.png";
inline constexpr std::string_view kVisibilityPattern = "vis_%06d.png";
inline constexpr std::string_view kAnnotationPattern = "ann_%06d.png";

/// Formats a printf-style pattern with a single integer field.
std::string indexed_name(std::string_view pattern, int index);

/// Loads `pattern`-named frames with contiguous indices starting at 0.
/// Reference index defaults to floor(N/2).
FrameSequence load_sequence(const std::filesystem::path& directory,
                            std::string_view pattern = kFramePattern);

/// Loads one mask per frame (0 = invisible). An empty path or missing
/// directory yields an all-visible volume.
VisibilityVolume load_visibility(const std::optional<std::filesystem::path>& directory,
                                 const FrameSequence& sequence,
                                 std::string_view pattern = kVisibilityPattern);

/// Annotation masks share the visibility layout; nonzero marks display pixels.
/// Throws DataError when any frame is missing.
VisibilityVolume load_annotations(const std::filesystem::path& directory,
                                  const FrameSequence& sequence,
                                  std::string_view pattern = kAnnotationPattern);

Image read_image(const std::filesystem::path& file);
void write_image(const std::filesystem::path& file, const Image& image);
Mask read_mask(const std::filesystem::path& file);
void write_mask(const std::filesystem::path& file, const Mask& mask);
/// 16-bit gray PNG of label ids.
void write_label_map(const std::filesystem::path& file, const LabelMap& labels);
LabelMap read_label_map(const std::filesystem::path& file);

/// Writes frame_000000.png ... into `directory` (created if needed).
void write_frames(const std::filesystem::path& directory, const FrameSequence& sequence,
                  std::string_view pattern = kFramePattern);
void write_visibility(const std::filesystem::path& directory, const VisibilityVolume& volume,
                      std::string_view pattern = kVisibilityPattern);

}  // namespace cinemagraph
