#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "cinemagraph/config.hpp"
#include "cinemagraph/errors.hpp"
#include "cinemagraph/manifest.hpp"
#include "cinemagraph/video_io.hpp"
#include "fixtures.hpp"

using namespace cinemagraph;
namespace fs = std::filesystem;

TEST_CASE("frame sequence round trip") {
  const auto dir = fixtures::temp_dir("io_frames");
  const auto video = fixtures::flicker_static(12, 9, 5, 3);
  write_frames(dir, video);
  CHECK(fs::exists(dir / "frame_000000.png"));
  CHECK(fs::exists(dir / "frame_000004.png"));
  const auto loaded = load_sequence(dir);
  CHECK(loaded.frame_count() == 5);
  CHECK(loaded.reference_index() == 2);
  for (int f = 0; f < 5; ++f) CHECK(loaded.frame(f) == video.frame(f));
}

TEST_CASE("frame gaps and missing directories are data errors") {
  const auto dir = fixtures::temp_dir("io_gap");
  const auto video = fixtures::flicker_static(4, 4, 4, 1);
  write_frames(dir, video);
  fs::remove(dir / "frame_000002.png");
  CHECK_THROWS_AS(load_sequence(dir), DataError);
  CHECK_THROWS_AS(load_sequence(dir / "nope"), DataError);
  const auto empty = fixtures::temp_dir("io_empty");
  CHECK_THROWS_AS(load_sequence(empty), DataError);
}

TEST_CASE("mismatched frame sizes are rejected") {
  std::vector<Image> frames{Image(4, 4), Image(5, 4)};
  CHECK_THROWS_AS(FrameSequence{frames}, DataError);
  CHECK_THROWS_AS(FrameSequence({Image(4, 4)}), DataError);
  CHECK_THROWS_AS(FrameSequence({Image(4, 4), Image(4, 4)}, 2), DataError);
}

TEST_CASE("visibility round trip and defaults") {
  const auto video = fixtures::flicker_static(6, 5, 3, 2);
  VisibilityVolume vis(6, 5, 3);
  vis.set(1, 2, 0, false);
  vis.set(5, 4, 2, false);
  const auto dir = fixtures::temp_dir("io_vis");
  write_visibility(dir, vis);
  CHECK(load_visibility(dir, video) == vis);
  CHECK_FALSE(load_visibility(std::nullopt, video).any_invisible());
  CHECK_FALSE(load_visibility(dir / "missing", video).any_invisible());
  fs::remove(dir / "vis_000001.png");
  CHECK_THROWS_AS(load_visibility(dir, video), DataError);
}

TEST_CASE("label map keeps ids beyond 8 bits") {
  LabelMap labels(20, 20);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i);
  const auto file = fixtures::temp_dir("io_labels") / "l.png";
  write_label_map(file, labels);
  CHECK(read_label_map(file) == labels);
}

TEST_CASE("run-length masks") {
  Mask m(7, 3, 0);
  m(0, 0) = m(1, 0) = m(6, 0) = 1;
  m(3, 2) = m(4, 2) = m(5, 2) = m(6, 2) = 1;
  const auto runs = encode_rle(m);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0] == RleRun{0, 0, 2});
  CHECK(runs[1] == RleRun{0, 6, 1});
  CHECK(runs[2] == RleRun{2, 3, 4});
  CHECK(decode_rle(runs, 7, 3) == m);
  CHECK(encode_rle(Mask(3, 3, 0)).empty());
  CHECK_THROWS_AS(decode_rle({{0, 5, 4}}, 7, 3), DataError);
}

TEST_CASE("manifest round trip") {
  Manifest m;
  m.width = 64;
  m.height = 48;
  m.frame_count = 30;
  m.reference_index = 15;
  m.loop_length = 58;
  DisplayRegionRecord d;
  d.id = 0;
  d.pixel_count = 12;
  d.bbox = {1, 2, 4, 5};
  d.gamma = 0.4;
  d.lambda = 0.011;
  d.rpca_iterations = 77;
  d.stabilization_fallback_frames = {3, 9};
  d.mask = {{2, 1, 4}, {3, 1, 4}, {4, 1, 4}};
  m.display_regions.push_back(d);
  m.repetitive.pixel_count = 4;
  m.repetitive.interval = FrameInterval{2, 20};
  m.repetitive.regions.push_back(
      {0, 4, {2, 20}, std::numeric_limits<double>::infinity(), {{0, 0, 2}, {1, 0, 2}}});
  m.lambda_per_segment = {0.011, 0.1 + 0.2};
  m.dropped_components = {{9, "too small: fewer than 50 pixels"}};
  m.warnings = {"a \"quoted\" warning"};
  m.config = config_to_map(PipelineConfig{});
  const auto text = manifest_to_string(m);
  CHECK(manifest_from_string(text) == m);
  CHECK(text.find("\"version\"") != std::string::npos);

  const auto dir = fixtures::temp_dir("io_manifest");
  write_output(fixtures::flicker_static(4, 4, 3, 1), m, dir);
  CHECK(read_manifest(dir / kManifestFile) == m);
  CHECK(fs::exists(dir / "frame_000002.png"));
  CHECK_THROWS_AS(manifest_from_string("{\"version\": 1"), DataError);
  CHECK_THROWS_AS(manifest_from_string("{\"version\": 99}"), DataError);
}

TEST_CASE("config parsing") {
  PipelineConfig c;
  apply_config_text(c, "# comment\n\ntheta = 80\nlevels=50, 75\n  tau=5  # trailing\n");
  CHECK(c.theta == 80.0);
  CHECK(c.levels == std::vector<double>{50.0, 75.0});
  CHECK(c.tau == 5);
  CHECK_THROWS_AS(apply_config_text(c, "thetta = 1\n"), UsageError);
  CHECK_THROWS_AS(apply_config_text(c, "theta\n"), UsageError);
  CHECK_THROWS_AS(set_config_value(c, "tau", "four"), UsageError);
  CHECK_THROWS_AS(set_config_value(c, "tau", "4.5"), UsageError);
  CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/c.conf"), UsageError);
}

TEST_CASE("config validation names the field") {
  PipelineConfig c;
  c.validate();
  c.growth = 1.0;
  try {
    c.validate();
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("growth") != std::string::npos);
  }
  PipelineConfig d;
  d.levels = {120.0};
  CHECK_THROWS_AS(d.validate(), UsageError);
  PipelineConfig e;
  e.crep_stride = 0;
  CHECK_THROWS_AS(e.validate(), UsageError);
}

TEST_CASE("config text round trip") {
  PipelineConfig c;
  c.theta = 77.25;
  c.seed = 12345678901234ULL;
  c.levels = {55.5};
  PipelineConfig back;
  apply_config_text(back, config_to_text(c));
  CHECK(config_to_map(back) == config_to_map(c));
  CHECK(back.seed == c.seed);

  const auto file = fixtures::temp_dir("io_config") / "c.conf";
  std::ofstream(file) << "theta = 90\nfeather_px = 3\n";
  PipelineConfig f;
  apply_config_file(f, file);
  set_config_value(f, "theta", "95");  // later sources override earlier ones
  CHECK(f.theta == 95.0);
  CHECK(f.feather_px == 3);
}
