#include "cinemagraph/video_io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <regex>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace fs = std::filesystem;

namespace {

struct PatternParts {
  std::string prefix;
  std::string suffix;
};

PatternParts split_pattern(std::string_view pattern) {
  static const std::regex field(R"(%0?\d*d)");
  const std::string text(pattern);
  std::smatch m;
  if (!std::regex_search(text, m, field)) {
    throw UsageError("file pattern '" + text + "' has no integer field");
  }
  return {m.prefix().str(), m.suffix().str()};
}

/// Indices of the files in `directory` matching the pattern.
std::map<int, fs::path> scan(const fs::path& directory, std::string_view pattern) {
  const PatternParts parts = split_pattern(pattern);
  std::map<int, fs::path> found;
  if (!fs::is_directory(directory)) return found;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() <= parts.prefix.size() + parts.suffix.size()) continue;
    if (name.compare(0, parts.prefix.size(), parts.prefix) != 0) continue;
    if (name.compare(name.size() - parts.suffix.size(), parts.suffix.size(), parts.suffix) != 0)
      continue;
    const std::string digits =
        name.substr(parts.prefix.size(), name.size() - parts.prefix.size() - parts.suffix.size());
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) continue;
    found.emplace(std::stoi(digits), entry.path());
  }
  return found;
}

Image from_mat(const cv::Mat& bgr) {
  Image image(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) image.set(x, y, Rgb{row[x][2], row[x][1], row[x][0]});
  }
  return image;
}

cv::Mat to_mat(const Image& image) {
  cv::Mat bgr(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      const Rgb c = image.at(x, y);
      row[x] = cv::Vec3b(c[2], c[1], c[0]);
    }
  }
  return bgr;
}

void write_mat(const fs::path& file, const cv::Mat& mat) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  bool ok = false;
  try {
    ok = cv::imwrite(file.string(), mat);
  } catch (const cv::Exception& e) {
    throw DataError("cannot write " + file.string() + ": " + e.what());
  }
  if (!ok) throw DataError("cannot write " + file.string());
}

VisibilityVolume load_masks(const fs::path& directory, const FrameSequence& sequence,
                            std::string_view pattern, const char* what) {
  VisibilityVolume volume(sequence.width(), sequence.height(), sequence.frame_count(), true);
  std::vector<int> missing;
  for (int f = 0; f < sequence.frame_count(); ++f) {
    if (!fs::exists(directory / indexed_name(pattern, f))) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      list += (i ? ", " : "") + std::to_string(missing[i]);
    }
    if (missing.size() > 20) list += ", ...";
    throw DataError(std::string(what) + " masks missing for " + std::to_string(missing.size()) +
                    " frame(s): " + list);
  }
  for (int f = 0; f < sequence.frame_count(); ++f) {
    const Mask mask = read_mask(directory / indexed_name(pattern, f));
    if (mask.width() != sequence.width() || mask.height() != sequence.height()) {
      throw DataError(std::string(what) + " mask " + std::to_string(f) +
                      " does not match the frame dimensions");
    }
    for (std::size_t p = 0; p < mask.size(); ++p) volume.set(p, f, mask[p] != 0);
  }
  return volume;
}

}  // namespace

std::string indexed_name(std::string_view pattern, int index) {
  const std::string fmt(pattern);
  const int n = std::snprintf(nullptr, 0, fmt.c_str(), index);
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, fmt.c_str(), index);
  return out;
}

Image read_image(const fs::path& file) {
  const cv::Mat bgr = cv::imread(file.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw DataError("cannot read image " + file.string());
  return from_mat(bgr);
}

void write_image(const fs::path& file, const Image& image) { write_mat(file, to_mat(image)); }

Mask read_mask(const fs::path& file) {
  const cv::Mat gray = cv::imread(file.string(), cv::IMREAD_GRAYSCALE);
  if (gray.empty()) throw DataError("cannot read mask " + file.string());
  Mask mask(gray.cols, gray.rows);
  for (int y = 0; y < gray.rows; ++y) {
    for (int x = 0; x < gray.cols; ++x) mask(x, y) = gray.at<std::uint8_t>(y, x);
  }
  return mask;
}

void write_mask(const fs::path& file, const Mask& mask) {
  cv::Mat gray(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) gray.at<std::uint8_t>(y, x) = mask(x, y);
  }
  write_mat(file, gray);
}

void write_label_map(const fs::path& file, const LabelMap& labels) {
  cv::Mat gray(labels.height(), labels.width(), CV_16UC1);
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      const int v = labels(x, y);
      if (v < 0 || v > 65535) throw DataError("label id does not fit in 16 bits");
      gray.at<std::uint16_t>(y, x) = static_cast<std::uint16_t>(v);
    }
  }
  write_mat(file, gray);
}

LabelMap read_label_map(const fs::path& file) {
  const cv::Mat gray = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
  if (gray.empty() || gray.type() != CV_16UC1) {
    throw DataError("cannot read 16-bit label map " + file.string());
  }
  LabelMap labels(gray.cols, gray.rows);
  for (int y = 0; y < gray.rows; ++y) {
    for (int x = 0; x < gray.cols; ++x) labels(x, y) = gray.at<std::uint16_t>(y, x);
  }
  return labels;
}

FrameSequence load_sequence(const fs::path& directory, std::string_view pattern) {
  if (!fs::is_directory(directory)) {
    throw DataError("input directory " + directory.string() + " does not exist");
  }
  const auto found = scan(directory, pattern);
  if (found.size() < 2) {
    throw DataError("need at least 2 frames matching '" + std::string(pattern) + "' in " +
                    directory.string() + ", found " + std::to_string(found.size()));
  }
  const int last = found.rbegin()->first;
  for (int i = 0; i <= last; ++i) {
    if (!found.contains(i)) {
      throw DataError("gap in frame sequence: missing index " + std::to_string(i) + " (" +
                      indexed_name(pattern, i) + ")");
    }
  }
  std::vector<Image> frames(static_cast<std::size_t>(last) + 1);
  std::string error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i <= last; ++i) {
    try {
      frames[static_cast<std::size_t>(i)] = read_image(found.at(i));
    } catch (const std::exception& e) {
#pragma omp critical
      error = e.what();
    }
  }
  if (!error.empty()) throw DataError(error);
  return FrameSequence(std::move(frames));
}

VisibilityVolume load_visibility(const std::optional<fs::path>& directory,
                                 const FrameSequence& sequence, std::string_view pattern) {
  if (!directory || directory->empty() || !fs::exists(*directory)) {
    return VisibilityVolume::all_visible(sequence);
  }
  return load_masks(*directory, sequence, pattern, "visibility");
}

VisibilityVolume load_annotations(const fs::path& directory, const FrameSequence& sequence,
                                  std::string_view pattern) {
  return load_masks(directory, sequence, pattern, "annotation");
}

void write_frames(const fs::path& directory, const FrameSequence& sequence,
                  std::string_view pattern) {
  fs::create_directories(directory);
  for (int f = 0; f < sequence.frame_count(); ++f) {
    write_image(directory / indexed_name(pattern, f), sequence.frame(f));
  }
}

void write_visibility(const fs::path& directory, const VisibilityVolume& volume,
                      std::string_view pattern) {
  fs::create_directories(directory);
  for (int f = 0; f < volume.frame_count(); ++f) {
    Mask mask(volume.width(), volume.height());
    for (std::size_t p = 0; p < mask.size(); ++p) mask[p] = volume.visible(p, f) ? 255 : 0;
    write_mask(directory / indexed_name(pattern, f), mask);
  }
}

}  // namespace cinemagraph
