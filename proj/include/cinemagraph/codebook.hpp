#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cinemagraph/hog3d.hpp"
#include "cinemagraph/parallel.hpp"

namespace cinemagraph {

struct Hog3dCodebook {
  Hog3dLayout layout;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> centers;
  /// k-means objective (sum of squared distances) after each Lloyd iteration.
  std::vector<double> objective_trace;

  int descriptor_dim() const { return centers.empty() ? 0 : static_cast<int>(centers[0].size()); }
  std::size_t size() const { return centers.size(); }
  /// Index of the nearest center (lowest index wins ties).
  int assign(std::span<const double> descriptor) const;
};

struct KMeansParams {
  int k = 100;
  int max_iterations = 100;
  std::uint64_t seed = 0;
};

/// k-means++ seeding followed by Lloyd iterations until the assignment stops
/// changing. Empty clusters are re-seeded to the point farthest from its
/// center. Throws DataError with fewer than k distinct points.
Hog3dCodebook train_codebook(std::span<const std::vector<double>> points,
                             const KMeansParams& params, const Hog3dLayout& layout = {},
                             Execution exec = Execution::parallel);

std::string codebook_to_string(const Hog3dCodebook& codebook);
Hog3dCodebook codebook_from_string(const std::string& text);
void save_codebook(const std::filesystem::path& file, const Hog3dCodebook& codebook);
Hog3dCodebook load_codebook(const std::filesystem::path& file);

}  // namespace cinemagraph
