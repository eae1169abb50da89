#include "cinemagraph/codebook.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cinemagraph/errors.hpp"
#include "cinemagraph/rng.hpp"

namespace cinemagraph {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

std::size_t count_distinct(std::span<const std::vector<double>> points) {
  std::vector<const std::vector<double>*> sorted;
  sorted.reserve(points.size());
  for (const auto& p : points) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return *a < *b; });
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || *sorted[i] != *sorted[i - 1]) ++distinct;
  }
  return distinct;
}

int nearest(std::span<const std::vector<double>> centers, std::span<const double> x,
            double* distance) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(centers[c], x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (distance) *distance = best_d;
  return best;
}

std::vector<std::vector<double>> seed_plus_plus(std::span<const std::vector<double>> points,
                                                int k, Rng& rng) {
  std::vector<std::vector<double>> centers;
  centers.push_back(points[rng.index(points.size())]);
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centers[0]);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    const double target = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      acc += d2[i];
      if (d2[i] > 0.0 && acc > target) {
        pick = i;
        break;
      }
      if (d2[i] > 0.0) pick = i;  // fallback against round-off at the tail
    }
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
  }
  return centers;
}

}  // namespace

int Hog3dCodebook::assign(std::span<const double> descriptor) const {
  if (static_cast<int>(descriptor.size()) != descriptor_dim()) {
    throw DataError("descriptor dimension does not match the codebook");
  }
  return nearest(centers, descriptor, nullptr);
}

Hog3dCodebook train_codebook(std::span<const std::vector<double>> points,
                             const KMeansParams& params, const Hog3dLayout& layout,
                             Execution exec) {
  if (params.k <= 0) throw UsageError("codebook size must be positive");
  if (points.empty()) throw DataError("no descriptors to cluster");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw DataError("descriptors differ in dimension");
  }
  const std::size_t distinct = count_distinct(points);
  if (distinct < static_cast<std::size_t>(params.k)) {
    throw DataError("need at least " + std::to_string(params.k) + " distinct descriptors, got " +
                    std::to_string(distinct));
  }

  Rng rng(params.seed);
  Hog3dCodebook book;
  book.layout = layout;
  book.seed = params.seed;
  book.centers = seed_plus_plus(points, params.k, rng);

  const auto n = static_cast<std::int64_t>(points.size());
  std::vector<int> assignment(points.size(), -1);
  std::vector<double> dist(points.size(), 0.0);
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    std::vector<int> next(points.size());
    auto assign_one = [&](std::int64_t i) { next[i] = nearest(book.centers, points[i], &dist[i]); };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < n; ++i) assign_one(i);
    } else {
      for (std::int64_t i = 0; i < n; ++i) assign_one(i);
    }
    double objective = 0.0;
    for (double d : dist) objective += d;
    book.objective_trace.push_back(objective);
    const bool stable = next == assignment;
    assignment = std::move(next);
    if (stable) break;

    std::vector<std::vector<double>> sums(book.centers.size(), std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(book.centers.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& s = sums[assignment[i]];
      for (std::size_t d = 0; d < dim; ++d) s[d] += points[i][d];
      ++counts[assignment[i]];
    }
    for (std::size_t c = 0; c < book.centers.size(); ++c) {
      if (counts[c] == 0) {
        const auto far = static_cast<std::size_t>(
            std::max_element(dist.begin(), dist.end()) - dist.begin());
        book.centers[c] = points[far];
        dist[far] = 0.0;
        continue;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        book.centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
  }
  return book;
}

std::string codebook_to_string(const Hog3dCodebook& book) {
  nlohmann::json j;
  j["format"] = "cinemagraph-codebook";
  j["version"] = 1;
  j["layout"] = {{"window_xy", book.layout.window_xy}, {"window_t", book.layout.window_t},
                 {"cells_xy", book.layout.cells_xy},   {"cells_t", book.layout.cells_t},
                 {"stride_xy", book.layout.stride_xy}, {"stride_t", book.layout.stride_t},
                 {"bins", Hog3dLayout::kBins}};
  j["seed"] = book.seed;
  j["k"] = book.centers.size();
  j["descriptor_dim"] = book.descriptor_dim();
  j["centers"] = book.centers;
  j["objective_trace"] = book.objective_trace;
  return j.dump() + "\n";
}

Hog3dCodebook codebook_from_string(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "cinemagraph-codebook" || j.at("version") != 1) {
      throw DataError("not a version-1 codebook file");
    }
    Hog3dCodebook book;
    const auto& l = j.at("layout");
    book.layout.window_xy = l.at("window_xy");
    book.layout.window_t = l.at("window_t");
    book.layout.cells_xy = l.at("cells_xy");
    book.layout.cells_t = l.at("cells_t");
    book.layout.stride_xy = l.at("stride_xy");
    book.layout.stride_t = l.at("stride_t");
    if (l.at("bins") != Hog3dLayout::kBins) throw DataError("unsupported HoG3D bin count");
    book.seed = j.at("seed");
    book.centers = j.at("centers").get<std::vector<std::vector<double>>>();
    book.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    if (book.centers.size() != j.at("k").get<std::size_t>() ||
        book.descriptor_dim() != j.at("descriptor_dim").get<int>()) {
      throw DataError("codebook centers do not match the recorded size");
    }
    return book;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed codebook: ") + e.what());
  }
}

void save_codebook(const std::filesystem::path& file, const Hog3dCodebook& book) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write codebook " + file.string());
  out << codebook_to_string(book);
}

Hog3dCodebook load_codebook(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open codebook " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return codebook_from_string(buffer.str());
}

}  // namespace cinemagraph
