#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cinemagraph/parallel.hpp"

namespace cinemagraph {

/// Internal nodes have feature >= 0 and route x[feature] <= threshold left.
/// Leaves have feature == -1 and store the positive fraction of their
/// training samples.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_votes = 0.0;
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int depth() const;
  /// Leaf positive fraction for one sample.
  double predict(std::span<const double> x) const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestParams {
  int n_trees = 100;
  int max_depth = 10;
  int min_samples_split = 2;
  /// Candidate features per split; <= 0 means floor(sqrt(dim)).
  int features_per_split = 0;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  int feature_dim = 0;
  int layout_version = 0;
  std::uint64_t seed = 0;
  int max_depth = 0;
  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

struct Classification {
  bool label = false;
  double vote_fraction = 0.0;
};

/// Bootstrap-aggregated CART trees grown on Gini impurity. Each tree draws
/// its own RNG stream from (seed, tree index), so the result is independent
/// of the thread count. Throws DataError unless both classes are present.
ForestModel train_forest(std::span<const std::vector<double>> features,
                         std::span<const std::uint8_t> labels, const ForestParams& params,
                         int layout_version = 0, Execution exec = Execution::parallel);

/// Fraction of trees voting positive; label is vote_fraction > 0.5.
/// Throws DataError on a feature dimension mismatch.
Classification classify(const ForestModel& model, std::span<const double> features);

std::string forest_to_string(const ForestModel& model);
ForestModel forest_from_string(const std::string& text);
void save_forest(const std::filesystem::path& file, const ForestModel& model);
ForestModel load_forest(const std::filesystem::path& file);

}  // namespace cinemagraph
