#include "cinemagraph/manifest.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cinemagraph/errors.hpp"
#include "cinemagraph/video_io.hpp"

namespace cinemagraph {

using nlohmann::json;

namespace {

// JSON has no infinity; scores may be +inf (zero low-frequency energy).
json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double to_number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DataError("manifest: unexpected string number '" + s + "'");
  }
  return j.get<double>();
}

json runs_to_json(const std::vector<RleRun>& runs) {
  json out = json::array();
  for (const auto& r : runs) out.push_back({r.y, r.x, r.length});
  return out;
}

std::vector<RleRun> runs_from_json(const json& j) {
  std::vector<RleRun> runs;
  for (const auto& r : j) runs.push_back({r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>()});
  return runs;
}

json interval_to_json(const FrameInterval& i) { return {i.first, i.last}; }
FrameInterval interval_from_json(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

}  // namespace

std::vector<RleRun> encode_rle(const Mask& mask) {
  std::vector<RleRun> runs;
  for (int y = 0; y < mask.height(); ++y) {
    int x = 0;
    while (x < mask.width()) {
      if (!mask(x, y)) {
        ++x;
        continue;
      }
      const int start = x;
      while (x < mask.width() && mask(x, y)) ++x;
      runs.push_back({y, start, x - start});
    }
  }
  return runs;
}

Mask decode_rle(const std::vector<RleRun>& runs, int width, int height) {
  Mask mask(width, height, 0);
  for (const auto& r : runs) {
    if (r.y < 0 || r.y >= height || r.x < 0 || r.length < 0 || r.x + r.length > width) {
      throw DataError("run-length entry outside the frame");
    }
    for (int x = r.x; x < r.x + r.length; ++x) mask(x, r.y) = 1;
  }
  return mask;
}

std::string manifest_to_string(const Manifest& m) {
  json j;
  j["version"] = m.version;
  j["width"] = m.width;
  j["height"] = m.height;
  j["frame_count"] = m.frame_count;
  j["reference_index"] = m.reference_index;
  j["loop_length"] = m.loop_length;
  json regions = json::array();
  for (const auto& r : m.display_regions) {
    regions.push_back({{"id", r.id},
                       {"pixel_count", r.pixel_count},
                       {"bbox", r.bbox},
                       {"gamma", r.gamma},
                       {"lambda", r.lambda},
                       {"rpca_iterations", r.rpca_iterations},
                       {"stabilization_fallback_frames", r.stabilization_fallback_frames},
                       {"mask_rle", runs_to_json(r.mask)}});
  }
  j["display_regions"] = regions;
  json rep;
  rep["pixel_count"] = m.repetitive.pixel_count;
  rep["interval"] = m.repetitive.interval ? interval_to_json(*m.repetitive.interval) : json(nullptr);
  json rep_regions = json::array();
  for (const auto& r : m.repetitive.regions) {
    rep_regions.push_back({{"id", r.id},
                           {"pixel_count", r.pixel_count},
                           {"interval", interval_to_json(r.interval)},
                           {"max_score", number(r.max_score)},
                           {"mask_rle", runs_to_json(r.mask)}});
  }
  rep["regions"] = rep_regions;
  j["repetitive"] = rep;
  j["lambda_per_segment"] = m.lambda_per_segment;
  json dropped = json::array();
  for (const auto& d : m.dropped_components) {
    dropped.push_back({{"pixel_count", d.pixel_count}, {"reason", d.reason}});
  }
  j["dropped_components"] = dropped;
  j["warnings"] = m.warnings;
  j["config"] = m.config;
  return j.dump(2) + "\n";
}

Manifest manifest_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    Manifest m;
    m.version = j.at("version").get<int>();
    if (m.version != kManifestVersion) {
      throw DataError("unsupported manifest version " + std::to_string(m.version));
    }
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.frame_count = j.at("frame_count").get<int>();
    m.reference_index = j.at("reference_index").get<int>();
    m.loop_length = j.at("loop_length").get<int>();
    for (const auto& r : j.at("display_regions")) {
      DisplayRegionRecord d;
      d.id = r.at("id").get<int>();
      d.pixel_count = r.at("pixel_count").get<std::size_t>();
      d.bbox = r.at("bbox").get<std::array<int, 4>>();
      d.gamma = r.at("gamma").get<double>();
      d.lambda = r.at("lambda").get<double>();
      d.rpca_iterations = r.at("rpca_iterations").get<int>();
      d.stabilization_fallback_frames =
          r.at("stabilization_fallback_frames").get<std::vector<int>>();
      d.mask = runs_from_json(r.at("mask_rle"));
      m.display_regions.push_back(std::move(d));
    }
    const auto& rep = j.at("repetitive");
    m.repetitive.pixel_count = rep.at("pixel_count").get<std::size_t>();
    if (!rep.at("interval").is_null()) m.repetitive.interval = interval_from_json(rep.at("interval"));
    for (const auto& r : rep.at("regions")) {
      RepetitiveRegionRecord d;
      d.id = r.at("id").get<int>();
      d.pixel_count = r.at("pixel_count").get<std::size_t>();
      d.interval = interval_from_json(r.at("interval"));
      d.max_score = to_number(r.at("max_score"));
      d.mask = runs_from_json(r.at("mask_rle"));
      m.repetitive.regions.push_back(std::move(d));
    }
    m.lambda_per_segment = j.at("lambda_per_segment").get<std::vector<double>>();
    for (const auto& d : j.at("dropped_components")) {
      m.dropped_components.push_back(
          {d.at("pixel_count").get<std::size_t>(), d.at("reason").get<std::string>()});
    }
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
}

Manifest read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open manifest " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_string(buffer.str());
}

void write_output(const FrameSequence& sequence, const Manifest& manifest,
                  const std::filesystem::path& directory) {
  if (sequence.frame_count() == 0) throw DataError("output sequence is empty");
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw DataError("cannot create output directory " + directory.string() + ": " + ec.message());
  write_frames(directory, sequence);
  std::ofstream out(directory / kManifestFile, std::ios::binary);
  if (!out) throw DataError("cannot write manifest in " + directory.string());
  out << manifest_to_string(manifest);
  if (!out) throw DataError("failed writing manifest in " + directory.string());
}

}  // namespace cinemagraph
