#include "cinemagraph/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "cinemagraph/errors.hpp"
#include "cinemagraph/homography.hpp"
#include "cinemagraph/inpaint.hpp"
#include "cinemagraph/video_io.hpp"

namespace cinemagraph {

StageError::StageError(std::string stage, const std::string& message, std::string hint,
                       int exit_code)
    : std::runtime_error("[" + stage + "] " + message),
      stage_(std::move(stage)),
      hint_(std::move(hint)),
      exit_code_(exit_code) {}

namespace {

/// Runs `fn` and rethrows library errors as StageError for `stage`.
template <typename Fn>
auto stage(const std::string& name, const std::string& hint, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const UsageError& e) {
    throw StageError(name, e.what(), hint, 1);
  } catch (const DataError& e) {
    throw StageError(name, e.what(), hint, 2);
  } catch (const NumericalError& e) {
    throw StageError(name, e.what(), hint, 3);
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageError(name, e.what(), hint, 2);
  }
}

std::array<int, 4> bbox_of(const PixelSet& pixels, int width) {
  std::array<int, 4> b{width, std::numeric_limits<int>::max(), -1, -1};
  for (std::size_t p : pixels) {
    const int x = static_cast<int>(p % width), y = static_cast<int>(p / width);
    b[0] = std::min(b[0], x);
    b[1] = std::min(b[1], y);
    b[2] = std::max(b[2], x);
    b[3] = std::max(b[3], y);
  }
  return b;
}

Mask mask_of(const PixelSet& pixels, int width, int height) {
  Mask m(width, height, 0);
  for (std::size_t p : pixels) m[p] = 1;
  return m;
}

/// Most frequent interval among `pixels`; ties go to the smaller (first, last).
FrameInterval modal_interval(const PixelSet& pixels, const Grid<FrameInterval>& intervals) {
  std::map<std::pair<int, int>, std::size_t> counts;
  for (std::size_t p : pixels) ++counts[{intervals[p].first, intervals[p].last}];
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return {best->first.first, best->first.second};
}

void write_trace_csv(const std::filesystem::path& file,
                     const std::vector<RegularizedSegment>& segments) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot write " + file.string());
  out.precision(17);
  out << "region,channel,iteration,mu,objective,residual\n";
  for (std::size_t r = 0; r < segments.size(); ++r) {
    for (int ch = 0; ch < 3; ++ch) {
      for (const auto& e : segments[r].traces[ch]) {
        out << r << ',' << ch << ',' << e.iteration << ',' << e.mu << ',' << e.objective << ','
            << e.residual << '\n';
      }
    }
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineInputs& in) {
  stage("config", "check the config file and command-line values", [&] {
    in.config.validate();
    if (in.video == nullptr) throw UsageError("no input video");
  });
  const FrameSequence& video = *in.video;
  const PipelineConfig& cfg = in.config;
  const int w = video.width(), h = video.height();
  const VisibilityVolume visibility =
      in.visibility != nullptr ? *in.visibility : VisibilityVolume::all_visible(video);
  if (!visibility.matches(video)) {
    throw StageError("load", "visibility volume does not match the video size",
                     "provide one visibility mask per frame at the frame resolution", 2);
  }

  PipelineResult result;
  Manifest& manifest = result.manifest;
  manifest.width = w;
  manifest.height = h;
  manifest.frame_count = video.frame_count();
  manifest.reference_index = video.reference_index();
  manifest.loop_length = loop_length(video.frame_count());
  manifest.config = config_to_map(cfg);

  DisplaySelection selection;
  selection.mask = Mask(w, h, 0);
  if (in.display && in.display_mask != nullptr) {
    selection = stage("classify", "the display mask must match the frame size", [&] {
      if (in.display_mask->width() != w || in.display_mask->height() != h) {
        throw DataError("display mask is " + std::to_string(in.display_mask->width()) + "x" +
                        std::to_string(in.display_mask->height()));
      }
      DisplaySelection s;
      s.mask = *in.display_mask;
      for (auto& v : s.mask) v = v ? 1 : 0;
      s.components = connected_components(s.mask);
      return s;
    });
  } else if (in.display) {
    const std::string hint = "train a model with train-forest or pass --no-display";
    stage("classify", hint, [&] {
      if (in.model == nullptr) throw DataError("no trained forest model was provided");
      if (in.codebook == nullptr) throw DataError("no HoG3D codebook was provided");
    });
    result.hierarchy = stage("segment", "check the input frames", [&] {
      return segment(video, visibility, cfg.segmentation(), in.exec);
    });
    selection = stage("classify", hint, [&] {
      return select_display_regions(result.hierarchy, *in.model, *in.codebook, video, visibility,
                                    cfg.selection(), in.exec);
    });
  }

  Mask animated(w, h, 0);
  if (in.repetitive) {
    result.repetitive = stage("repetitive", "the detector needs at least 8 frames", [&] {
      if (in.repetitive_field == nullptr) {
        return repetitive_mask(video, visibility, cfg.repetitive(), in.exec);
      }
      if (in.repetitive_field->mask.width() != w || in.repetitive_field->mask.height() != h) {
        throw DataError("repetitive field size differs from the video");
      }
      return *in.repetitive_field;
    });
    animated = result.repetitive.mask;
    // Display regions win where the two kinds of animation overlap.
    for (std::size_t p = 0; p < animated.size(); ++p) {
      if (selection.mask[p]) animated[p] = 0;
    }
  }

  std::vector<RegionVideo> region_videos;
  for (std::size_t r = 0; r < selection.components.size(); ++r) {
    const PixelSet& comp = selection.components[r];
    const std::string name = "render/region " + std::to_string(r);
    const FrameSequence filled = stage(name + "/inpaint", "check the visibility masks", [&] {
      return inpaint(video, visibility, comp);
    });
    const StabilizationResult stable = stage(name + "/stabilize", "check the track file", [&] {
      if (in.tracks != nullptr) return stabilize(filled, *in.tracks);
      return stabilize(filled, comp, TrackerParams{},
                       TrackFilter{cfg.min_track_length, cfg.max_track_stddev});
    });
    RegularizedSegment reg = stage(name + "/regularize", "try a larger rpca_max_iter", [&] {
      return regularize_segment(stable.video, comp, cfg.regularize());
    });

    DisplayRegionRecord rec;
    rec.id = static_cast<int>(r);
    rec.pixel_count = comp.size();
    rec.bbox = bbox_of(comp, w);
    rec.gamma = reg.gamma;
    rec.lambda = reg.lambda;
    rec.rpca_iterations = *std::max_element(reg.iterations.begin(), reg.iterations.end());
    rec.stabilization_fallback_frames = stable.fallback_frames;
    rec.mask = encode_rle(mask_of(comp, w, h));
    manifest.display_regions.push_back(std::move(rec));
    manifest.lambda_per_segment.push_back(reg.lambda);
    region_videos.push_back(reg.video);
    result.regularized.push_back(std::move(reg));
  }
  manifest.dropped_components = selection.dropped;

  const auto rep_components = connected_components(animated);
  PixelSet rep_pixels;
  for (std::size_t r = 0; r < rep_components.size(); ++r) {
    const PixelSet& comp = rep_components[r];
    RepetitiveRegionRecord rec;
    rec.id = static_cast<int>(r);
    rec.pixel_count = comp.size();
    rec.interval = modal_interval(comp, result.repetitive.best_interval);
    for (std::size_t p : comp) rec.max_score = std::max(rec.max_score, result.repetitive.score[p]);
    rec.mask = encode_rle(mask_of(comp, w, h));
    manifest.repetitive.regions.push_back(std::move(rec));
    rep_pixels.insert(rep_pixels.end(), comp.begin(), comp.end());
  }
  std::sort(rep_pixels.begin(), rep_pixels.end());
  manifest.repetitive.pixel_count = rep_pixels.size();
  if (!rep_pixels.empty()) {
    manifest.repetitive.interval = modal_interval(rep_pixels, result.repetitive.best_interval);
  }

  if (region_videos.empty() && rep_pixels.empty()) {
    manifest.warnings.push_back("no animated regions found; the output repeats the reference frame");
  }

  result.output = stage("render/composite", "check the region masks", [&] {
    RenderInputs ri;
    ri.source = &video;
    ri.display_regions = region_videos;
    if (in.repetitive) {
      ri.repetitive_mask = &animated;
      ri.repetitive_intervals = &result.repetitive.best_interval;
    }
    ri.feather_px = cfg.feather_px;
    return render_loop(ri);
  });
  return result;
}

void export_levels(const std::filesystem::path& directory, const MergeHierarchy& hierarchy,
                   std::span<const double> levels) {
  std::filesystem::create_directories(directory);
  for (double percent : levels) {
    char name[32];
    std::snprintf(name, sizeof name, "level_%03d.png", static_cast<int>(std::lround(percent)));
    write_label_map(directory / name, level(hierarchy, percent));
  }
}

PipelineResult run_pipeline(const PipelineFiles& files) {
  FrameSequence video = stage("load", "frames must be named frame_000000.png, frame_000001.png, ...",
                              [&] { return load_sequence(files.input_dir); });
  if (files.reference_index) {
    stage("load", "the reference index must lie inside the sequence",
          [&] { video.set_reference_index(*files.reference_index); });
  }
  const VisibilityVolume visibility =
      stage("load", "visibility masks must be named vis_000000.png, ... at the frame size",
            [&] { return load_visibility(files.visibility_dir, video); });

  std::optional<ForestModel> model;
  std::optional<Hog3dCodebook> codebook;
  if (files.display) {
    const std::string hint = "pass --model and --codebook from train-forest / train-codebook, or --no-display";
    stage("classify", hint, [&] {
      if (!files.model) throw DataError("no forest model given");
      if (!files.codebook) throw DataError("no codebook given");
      model = load_forest(*files.model);
      codebook = load_codebook(*files.codebook);
    });
  }
  std::optional<std::vector<FeatureTrack>> tracks;
  if (files.tracks) {
    tracks = stage("load", "one track per line: start_frame x0 y0 x1 y1 ...",
                   [&] { return load_tracks(*files.tracks); });
  }

  PipelineInputs in;
  in.video = &video;
  in.visibility = &visibility;
  in.model = model ? &*model : nullptr;
  in.codebook = codebook ? &*codebook : nullptr;
  in.tracks = tracks ? &*tracks : nullptr;
  in.display = files.display;
  in.repetitive = files.repetitive;
  in.config = files.config;
  in.exec = files.exec;
  PipelineResult result = run_pipeline(in);

  stage("output", "check that the output directory is writable", [&] {
    write_output(result.output, result.manifest, files.output_dir);
    if (files.export_levels) {
      const MergeHierarchy hierarchy =
          files.display ? result.hierarchy
                        : segment(video, visibility, files.config.segmentation(), files.exec);
      export_levels(files.output_dir / "levels", hierarchy, files.config.levels);
    }
    if (files.export_diagnostics) {
      const auto dir = files.output_dir / "diagnostics";
      std::filesystem::create_directories(dir);
      Mask display(video.width(), video.height(), 0);
      for (const auto& r : result.manifest.display_regions) {
        const Mask m = decode_rle(r.mask, video.width(), video.height());
        for (std::size_t p = 0; p < m.size(); ++p) display[p] |= m[p];
      }
      write_mask(dir / "display_mask.png", display);
      if (files.repetitive) write_mask(dir / "repetitive_mask.png", result.repetitive.mask);
      write_trace_csv(dir / "rpca_trace.csv", result.regularized);
    }
  });
  return result;
}

}  // namespace cinemagraph
