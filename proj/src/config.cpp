#include "cinemagraph/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw UsageError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
Field number(const char* key, T PipelineConfig::*member) {
  return {key,
          [key, member](PipelineConfig& c, const std::string& v) {
            c.*member = parse_number<T>(key, v);
          },
          [member](const PipelineConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      number("theta", &PipelineConfig::theta),
      number("alpha1", &PipelineConfig::alpha1),
      number("beta1", &PipelineConfig::beta1),
      number("alpha2", &PipelineConfig::alpha2),
      number("init_threshold", &PipelineConfig::init_threshold),
      number("growth", &PipelineConfig::growth),
      number("appearance_weight", &PipelineConfig::appearance_weight),
      number("temporal_weight", &PipelineConfig::temporal_weight),
      {"levels",
       [](PipelineConfig& c, const std::string& v) {
         std::vector<double> levels;
         std::stringstream in(v);
         std::string item;
         while (std::getline(in, item, ',')) levels.push_back(parse_number<double>("levels", item));
         if (levels.empty()) throw UsageError("config key 'levels': empty list");
         c.levels = std::move(levels);
       },
       [](const PipelineConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.levels.size(); ++i) {
           if (i) out += ',';
           out += format_double(c.levels[i]);
         }
         return out;
       }},
      number("tau", &PipelineConfig::tau),
      number("crep_gate", &PipelineConfig::crep_gate),
      number("luma_gate", &PipelineConfig::luma_gate),
      number("crep_stride", &PipelineConfig::crep_stride),
      number("min_segment_px", &PipelineConfig::min_segment_px),
      number("max_segment_frac", &PipelineConfig::max_segment_frac),
      number("positive_overlap", &PipelineConfig::positive_overlap),
      number("n_trees", &PipelineConfig::n_trees),
      number("max_depth", &PipelineConfig::max_depth),
      number("codebook_k", &PipelineConfig::codebook_k),
      number("lambda_base", &PipelineConfig::lambda_base),
      number("lambda_slope", &PipelineConfig::lambda_slope),
      number("rpca_tol", &PipelineConfig::rpca_tol),
      number("rpca_max_iter", &PipelineConfig::rpca_max_iter),
      number("min_track_length", &PipelineConfig::min_track_length),
      number("max_track_stddev", &PipelineConfig::max_track_stddev),
      number("feather_px", &PipelineConfig::feather_px),
      number("seed", &PipelineConfig::seed),
  };
  return table;
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw UsageError(std::string("config '") + key + "' " + what);
}

}  // namespace

void PipelineConfig::validate() const {
  require(theta >= 0.0, "theta", "must be >= 0");
  require(alpha1 >= 1 && beta1 >= 1 && alpha2 >= 1, "alpha1/beta1/alpha2", "must be >= 1");
  require(init_threshold > 0.0, "init_threshold", "must be > 0");
  require(growth > 1.0, "growth", "must be > 1");
  require(appearance_weight >= 0.0, "appearance_weight", "must be >= 0");
  require(temporal_weight >= 0.0, "temporal_weight", "must be >= 0");
  require(!levels.empty(), "levels", "must not be empty");
  for (double l : levels) require(l >= 0.0 && l <= 100.0, "levels", "entries must be in [0, 100]");
  require(tau >= 1, "tau", "must be >= 1");
  require(crep_stride >= 1, "crep_stride", "must be >= 1");
  require(min_segment_px >= 0, "min_segment_px", "must be >= 0");
  require(max_segment_frac > 0.0 && max_segment_frac <= 1.0, "max_segment_frac",
          "must be in (0, 1]");
  require(positive_overlap >= 0.0 && positive_overlap < 1.0, "positive_overlap",
          "must be in [0, 1)");
  require(n_trees >= 1, "n_trees", "must be >= 1");
  require(max_depth >= 0, "max_depth", "must be >= 0");
  require(codebook_k >= 1, "codebook_k", "must be >= 1");
  require(lambda_base > 0.0, "lambda_base", "must be > 0");
  require(lambda_slope >= 0.0, "lambda_slope", "must be >= 0");
  require(rpca_tol > 0.0, "rpca_tol", "must be > 0");
  require(rpca_max_iter >= 1, "rpca_max_iter", "must be >= 1");
  require(min_track_length >= 2, "min_track_length", "must be >= 2");
  require(max_track_stddev > 0.0, "max_track_stddev", "must be > 0");
  require(feather_px >= 0, "feather_px", "must be >= 0");
}

SegmentationParams PipelineConfig::segmentation() const {
  SegmentationParams p;
  p.initial_threshold = init_threshold;
  p.growth = growth;
  p.appearance_weight = appearance_weight;
  p.temporal_weight = temporal_weight;
  p.descriptor.alpha1 = alpha1;
  p.descriptor.beta1 = beta1;
  p.descriptor.alpha2 = alpha2;
  p.descriptor.theta = theta;
  return p;
}

RepetitiveParams PipelineConfig::repetitive() const {
  RepetitiveParams p;
  p.tau = tau;
  p.stride = crep_stride;
  p.score_gate = crep_gate;
  p.luma_gate = luma_gate;
  return p;
}

SelectionParams PipelineConfig::selection() const {
  SelectionParams p;
  p.levels = levels;
  p.min_component_pixels = static_cast<std::size_t>(min_segment_px);
  p.max_component_fraction = max_segment_frac;
  return p;
}

ForestParams PipelineConfig::forest() const {
  ForestParams p;
  p.n_trees = n_trees;
  p.max_depth = max_depth;
  p.seed = seed;
  return p;
}

RegularizeParams PipelineConfig::regularize() const {
  RegularizeParams p;
  p.lambda_base = lambda_base;
  p.lambda_slope = lambda_slope;
  p.descriptor = segmentation().descriptor;
  p.rpca.tolerance = rpca_tol;
  p.rpca.max_iterations = rpca_max_iter;
  return p;
}

void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(config, value);
      return;
    }
  }
  throw UsageError("unknown config key '" + key + "'");
}

void apply_config_text(PipelineConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open config file " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

std::map<std::string, std::string> config_to_map(const PipelineConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& f : fields()) out[f.key] = f.get(config);
  return out;
}

std::string config_to_text(const PipelineConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(config) + "\n";
  return out;
}

}  // namespace cinemagraph
