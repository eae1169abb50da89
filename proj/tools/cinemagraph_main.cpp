// Command-line front end: one subcommand per pipeline stage plus `pipeline`
// for the whole run.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cinemagraph/codebook.hpp"
#include "cinemagraph/config.hpp"
#include "cinemagraph/display_classifier.hpp"
#include "cinemagraph/errors.hpp"
#include "cinemagraph/hog3d.hpp"
#include "cinemagraph/parallel.hpp"
#include "cinemagraph/pipeline.hpp"
#include "cinemagraph/random_forest.hpp"
#include "cinemagraph/repetitive.hpp"
#include "cinemagraph/segment_features.hpp"
#include "cinemagraph/segmentation.hpp"
#include "cinemagraph/video_io.hpp"

namespace fs = std::filesystem;
using namespace cinemagraph;

namespace {

struct Common {
  std::optional<fs::path> config_file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool serial = false;

  void add_to(CLI::App* app, bool with_seed) {
    app->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    app->add_option("--set", overrides, "override one config key (key=value), repeatable");
    app->add_option("--threads", threads, "worker threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    app->add_flag("--serial", serial, "use the serial reference kernels");
    if (with_seed) app->add_option("--seed", seed, "RNG seed");
  }

  /// Defaults, then the config file, then command-line values.
  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (config_file) apply_config_file(cfg, *config_file);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    cfg.validate();
    if (threads > 0) set_thread_budget(threads);
    return cfg;
  }

  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
};

std::optional<fs::path> visibility_dir(const std::optional<fs::path>& given, const fs::path& input) {
  if (given) return given;
  if (fs::exists(input / indexed_name(kVisibilityPattern, 0))) return input;
  return std::nullopt;
}

/// Reference-frame annotation of a training clip: annotation.png if present,
/// else the per-frame ann_*.png masks at the reference index.
Mask clip_annotation(const fs::path& clip, const FrameSequence& video) {
  if (fs::exists(clip / "annotation.png")) return read_mask(clip / "annotation.png");
  const VisibilityVolume ann = load_annotations(clip, video);
  Mask m(video.width(), video.height(), 0);
  for (std::size_t p = 0; p < m.size(); ++p) m[p] = ann.visible(p, video.reference_index()) ? 1 : 0;
  return m;
}

void print_summary(const Manifest& m) {
  std::cout << "display regions: " << m.display_regions.size()
            << ", repetitive pixels: " << m.repetitive.pixel_count
            << ", loop length: " << m.loop_length << '\n';
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cinemagraphs from aligned urban video"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cinemagraph 1.0");

  // train-codebook
  Common cb_common;
  std::vector<fs::path> cb_inputs;
  fs::path cb_output;
  auto* cb = app.add_subcommand("train-codebook", "k-means HoG3D codebook from training clips");
  cb->add_option("--input", cb_inputs, "clip directories")->required()->check(CLI::ExistingDirectory);
  cb->add_option("--output", cb_output, "codebook file")->required();
  cb_common.add_to(cb, true);

  // train-forest
  Common rf_common;
  std::vector<fs::path> rf_inputs;
  fs::path rf_output, rf_codebook;
  auto* rf = app.add_subcommand("train-forest", "random forest from annotated clips");
  rf->add_option("--input", rf_inputs, "annotated clip directories")
      ->required()
      ->check(CLI::ExistingDirectory);
  rf->add_option("--codebook", rf_codebook, "codebook file")->required()->check(CLI::ExistingFile);
  rf->add_option("--output", rf_output, "model file")->required();
  rf_common.add_to(rf, true);

  // segment
  Common sg_common;
  fs::path sg_input, sg_output;
  std::optional<fs::path> sg_vis;
  bool sg_levels = false;
  auto* sg = app.add_subcommand("segment", "hierarchical segmentation merge log");
  sg->add_option("--input", sg_input, "frame directory")->required()->check(CLI::ExistingDirectory);
  sg->add_option("--output", sg_output, "output directory")->required();
  sg->add_option("--visibility", sg_vis, "visibility mask directory")->check(CLI::ExistingDirectory);
  sg->add_flag("--export-levels", sg_levels, "write a label map per hierarchy level");
  sg_common.add_to(sg, false);

  // detect-repetitive
  Common dr_common;
  fs::path dr_input, dr_output;
  std::optional<fs::path> dr_vis;
  std::optional<int> dr_stride;
  auto* dr = app.add_subcommand("detect-repetitive", "per-pixel repetitiveness field");
  dr->add_option("--input", dr_input, "frame directory")->required()->check(CLI::ExistingDirectory);
  dr->add_option("--output", dr_output, "output directory")->required();
  dr->add_option("--visibility", dr_vis, "visibility mask directory")->check(CLI::ExistingDirectory);
  dr->add_option("--stride", dr_stride, "interval endpoint stride (1 = exhaustive)")
      ->check(CLI::PositiveNumber);
  dr_common.add_to(dr, false);

  // render
  Common rd_common;
  fs::path rd_input, rd_output;
  std::optional<fs::path> rd_vis, rd_display, rd_repetitive, rd_tracks;
  std::optional<int> rd_reference;
  auto* rd = app.add_subcommand("render", "loop from precomputed masks");
  rd->add_option("--input", rd_input, "frame directory")->required()->check(CLI::ExistingDirectory);
  rd->add_option("--output", rd_output, "output directory")->required();
  rd->add_option("--visibility", rd_vis, "visibility mask directory")->check(CLI::ExistingDirectory);
  rd->add_option("--display-mask", rd_display, "display mask PNG")->check(CLI::ExistingFile);
  rd->add_option("--repetitive", rd_repetitive, "repetitive.csv from detect-repetitive")
      ->check(CLI::ExistingFile);
  rd->add_option("--tracks", rd_tracks, "feature track file")->check(CLI::ExistingFile);
  rd->add_option("--reference-index", rd_reference, "reference frame")->check(CLI::NonNegativeNumber);
  rd_common.add_to(rd, false);

  // pipeline
  Common pl_common;
  PipelineFiles pl;
  bool pl_no_display = false, pl_no_repetitive = false;
  std::optional<int> pl_stride;
  auto* pp = app.add_subcommand("pipeline", "segment, classify, detect and render");
  pp->add_option("--input", pl.input_dir, "frame directory")->required()->check(CLI::ExistingDirectory);
  pp->add_option("--output", pl.output_dir, "output directory")->required();
  pp->add_option("--visibility", pl.visibility_dir, "visibility mask directory")
      ->check(CLI::ExistingDirectory);
  pp->add_option("--model", pl.model, "forest model file");
  pp->add_option("--codebook", pl.codebook, "codebook file");
  pp->add_option("--tracks", pl.tracks, "feature track file")->check(CLI::ExistingFile);
  pp->add_option("--reference-index", pl.reference_index, "reference frame")
      ->check(CLI::NonNegativeNumber);
  pp->add_option("--stride", pl_stride, "interval endpoint stride (1 = exhaustive)")
      ->check(CLI::PositiveNumber);
  pp->add_flag("--no-display", pl_no_display, "skip display classification");
  pp->add_flag("--no-repetitive", pl_no_repetitive, "skip repetitive detection");
  pp->add_flag("--export-levels", pl.export_levels, "write hierarchy label maps");
  pp->add_flag("--export-diagnostics", pl.export_diagnostics, "write masks and RPCA traces");
  pl_common.add_to(pp, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cb) {
      const PipelineConfig cfg = cb_common.resolve();
      std::vector<std::vector<double>> points;
      for (const auto& clip : cb_inputs) {
        for (auto& d : hog3d_descriptors(load_sequence(clip), {}, cb_common.exec())) {
          points.push_back(std::move(d.values));
        }
      }
      const Hog3dCodebook book =
          train_codebook(points, {cfg.codebook_k, 100, cfg.seed}, {}, cb_common.exec());
      save_codebook(cb_output, book);
      std::cout << "codebook: " << book.size() << " words from " << points.size()
                << " descriptors\n";
    } else if (*rf) {
      const PipelineConfig cfg = rf_common.resolve();
      const Hog3dCodebook book = load_codebook(rf_codebook);
      TrainingSamples all;
      for (const auto& clip : rf_inputs) {
        const FrameSequence video = load_sequence(clip);
        const VisibilityVolume vis = load_visibility(visibility_dir(std::nullopt, clip), video);
        TrainingSamples s =
            harvest_training_samples(video, vis, clip_annotation(clip, video), book,
                                     cfg.segmentation(), cfg.levels, cfg.positive_overlap,
                                     rf_common.exec());
        for (auto& f : s.features) all.features.push_back(std::move(f));
        all.labels.insert(all.labels.end(), s.labels.begin(), s.labels.end());
      }
      const ForestModel model =
          train_forest(all.features, all.labels, cfg.forest(), kFeatureLayoutVersion, rf_common.exec());
      save_forest(rf_output, model);
      std::size_t positives = 0;
      for (auto l : all.labels) positives += l;
      std::cout << "forest: " << model.trees.size() << " trees on " << all.labels.size()
                << " segments (" << positives << " positive)\n";
    } else if (*sg) {
      const PipelineConfig cfg = sg_common.resolve();
      const FrameSequence video = load_sequence(sg_input);
      const VisibilityVolume vis = load_visibility(visibility_dir(sg_vis, sg_input), video);
      const MergeHierarchy h = segment(video, vis, cfg.segmentation(), sg_common.exec());
      fs::create_directories(sg_output);
      std::ofstream log(sg_output / "merges.csv");
      log.precision(17);
      log << "region_a,region_b,distance,threshold\n";
      for (const auto& m : h.merges()) {
        log << m.region_a << ',' << m.region_b << ',' << m.distance << ',' << m.threshold << '\n';
      }
      if (!log) throw DataError("cannot write " + (sg_output / "merges.csv").string());
      if (sg_levels) export_levels(sg_output, h, cfg.levels);
      std::cout << "merges: " << h.total_merges() << '\n';
    } else if (*dr) {
      PipelineConfig cfg = dr_common.resolve();
      if (dr_stride) cfg.crep_stride = *dr_stride;
      const FrameSequence video = load_sequence(dr_input);
      const VisibilityVolume vis = load_visibility(visibility_dir(dr_vis, dr_input), video);
      const RepetitiveField field = repetitive_mask(video, vis, cfg.repetitive(), dr_common.exec());
      fs::create_directories(dr_output);
      std::ofstream out(dr_output / "repetitive.csv");
      write_repetitive_field(out, field);
      if (!out) throw DataError("cannot write " + (dr_output / "repetitive.csv").string());
      Mask png = field.mask;
      for (auto& v : png) v = v ? 255 : 0;
      write_mask(dr_output / "repetitive_mask.png", png);
      std::size_t count = 0;
      for (auto v : field.mask) count += v ? 1 : 0;
      std::cout << "repetitive pixels: " << count << '\n';
    } else if (*rd) {
      const PipelineConfig cfg = rd_common.resolve();
      FrameSequence video = load_sequence(rd_input);
      if (rd_reference) video.set_reference_index(*rd_reference);
      const VisibilityVolume vis = load_visibility(visibility_dir(rd_vis, rd_input), video);
      std::optional<Mask> display;
      if (rd_display) display = read_mask(*rd_display);
      std::optional<RepetitiveField> field;
      if (rd_repetitive) {
        std::ifstream in(*rd_repetitive);
        field = read_repetitive_field(in);
      }
      std::optional<std::vector<FeatureTrack>> tracks;
      if (rd_tracks) tracks = load_tracks(*rd_tracks);
      PipelineInputs in;
      in.video = &video;
      in.visibility = &vis;
      in.display = display.has_value();
      in.display_mask = display ? &*display : nullptr;
      in.repetitive = field.has_value();
      in.repetitive_field = field ? &*field : nullptr;
      in.tracks = tracks ? &*tracks : nullptr;
      in.config = cfg;
      in.exec = rd_common.exec();
      const PipelineResult result = run_pipeline(in);
      write_output(result.output, result.manifest, rd_output);
      print_summary(result.manifest);
    } else if (*pp) {
      pl.config = pl_common.resolve();
      if (pl_stride) pl.config.crep_stride = *pl_stride;
      pl.visibility_dir = visibility_dir(pl.visibility_dir, pl.input_dir);
      pl.display = !pl_no_display;
      pl.repetitive = !pl_no_repetitive;
      pl.exec = pl_common.exec();
      print_summary(run_pipeline(pl).manifest);
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage '" << e.stage() << "': " << e.what() << '\n';
    if (!e.hint().empty()) std::cerr << "hint: " << e.hint() << '\n';
    return e.exit_code();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
