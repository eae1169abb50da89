#include "cinemagraph/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "cinemagraph/errors.hpp"
#include "cinemagraph/rng.hpp"

namespace cinemagraph {

namespace {

double gini(double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  return 2.0 * p * (1.0 - p);
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child impurity
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const std::vector<double>> x, std::span<const std::uint8_t> y,
              const ForestParams& params, int features_per_split, Rng rng)
      : x_(x), y_(y), params_(params), mtry_(features_per_split), rng_(std::move(rng)) {}

  DecisionTree build() {
    const std::size_t n = x_.size();
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = rng_.index(n);
    std::sort(sample.begin(), sample.end());
    DecisionTree tree;
    grow(tree, sample, 0);
    return tree;
  }

 private:
  int grow(DecisionTree& tree, std::vector<std::size_t>& sample, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double positives = 0.0;
    for (auto i : sample) positives += y_[i];
    const double total = static_cast<double>(sample.size());
    const bool pure = positives == 0.0 || positives == total;
    if (depth >= params_.max_depth || pure ||
        sample.size() < static_cast<std::size_t>(std::max(2, params_.min_samples_split))) {
      tree.nodes[id].leaf_votes = positives / total;
      return id;
    }
    const Split split = best_split(sample, positives);
    if (split.feature < 0 || !(split.impurity < gini(positives, total))) {
      tree.nodes[id].leaf_votes = positives / total;
      return id;
    }
    std::vector<std::size_t> left, right;
    for (auto i : sample) {
      (x_[i][split.feature] <= split.threshold ? left : right).push_back(i);
    }
    sample.clear();
    sample.shrink_to_fit();
    tree.nodes[id].feature = split.feature;
    tree.nodes[id].threshold = split.threshold;
    const int l = grow(tree, left, depth + 1);
    tree.nodes[id].left = l;
    const int r = grow(tree, right, depth + 1);
    tree.nodes[id].right = r;
    return id;
  }

  std::vector<int> draw_features() {
    const int dim = static_cast<int>(x_.front().size());
    std::vector<int> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), 0);
    const int m = std::min(mtry_, dim);
    for (int i = 0; i < m; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng_.index(static_cast<std::size_t>(dim - i));
      std::swap(order[i], order[j]);
    }
    order.resize(static_cast<std::size_t>(m));
    return order;
  }

  Split best_split(const std::vector<std::size_t>& sample, double positives) {
    Split best;
    best.impurity = std::numeric_limits<double>::infinity();
    const double total = static_cast<double>(sample.size());
    std::vector<std::pair<double, std::uint8_t>> values(sample.size());
    for (int feature : draw_features()) {
      for (std::size_t k = 0; k < sample.size(); ++k) {
        values[k] = {x_[sample[k]][feature], y_[sample[k]]};
      }
      std::sort(values.begin(), values.end());
      double left_pos = 0.0;
      for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        left_pos += values[k].second;
        if (values[k].first == values[k + 1].first) continue;
        const double nl = static_cast<double>(k + 1);
        const double nr = total - nl;
        const double impurity =
            (nl * gini(left_pos, nl) + nr * gini(positives - left_pos, nr)) / total;
        if (impurity < best.impurity) {
          double t = 0.5 * (values[k].first + values[k + 1].first);
          if (!(t < values[k + 1].first)) t = values[k].first;
          best = {feature, t, impurity};
        }
      }
    }
    return best;
  }

  std::span<const std::vector<double>> x_;
  std::span<const std::uint8_t> y_;
  const ForestParams& params_;
  int mtry_;
  Rng rng_;
};

int depth_from(const DecisionTree& tree, int node) {
  const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.feature < 0) return 0;
  return 1 + std::max(depth_from(tree, n.left), depth_from(tree, n.right));
}

}  // namespace

int DecisionTree::depth() const { return nodes.empty() ? 0 : depth_from(*this, 0); }

double DecisionTree::predict(std::span<const double> x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(node)];
    node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].leaf_votes;
}

ForestModel train_forest(std::span<const std::vector<double>> features,
                         std::span<const std::uint8_t> labels, const ForestParams& params,
                         int layout_version, Execution exec) {
  if (features.size() != labels.size()) throw DataError("feature and label counts differ");
  if (features.size() < 2) throw DataError("need at least 2 training samples");
  if (params.n_trees <= 0 || params.max_depth < 0) throw UsageError("invalid forest parameters");
  const std::size_t dim = features.front().size();
  if (dim == 0) throw DataError("empty feature vectors");
  for (const auto& f : features) {
    if (f.size() != dim) throw DataError("feature vectors differ in dimension");
  }
  const auto positives = std::count_if(labels.begin(), labels.end(), [](auto l) { return l != 0; });
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size())) {
    throw DataError("training set contains a single class");
  }
  std::vector<std::uint8_t> y(labels.begin(), labels.end());
  for (auto& l : y) l = l ? 1 : 0;

  const int mtry = params.features_per_split > 0
                       ? params.features_per_split
                       : std::max(1, static_cast<int>(std::floor(std::sqrt(double(dim)))));
  ForestModel model;
  model.feature_dim = static_cast<int>(dim);
  model.layout_version = layout_version;
  model.seed = params.seed;
  model.max_depth = params.max_depth;
  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  auto body = [&](int t) {
    TreeBuilder builder(features, y, params, mtry, Rng::stream(params.seed, static_cast<std::uint64_t>(t)));
    model.trees[static_cast<std::size_t>(t)] = builder.build();
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < params.n_trees; ++t) body(t);
  } else {
    for (int t = 0; t < params.n_trees; ++t) body(t);
  }
  return model;
}

Classification classify(const ForestModel& model, std::span<const double> features) {
  if (static_cast<int>(features.size()) != model.feature_dim) {
    throw DataError("feature dimension " + std::to_string(features.size()) +
                    " does not match the model's " + std::to_string(model.feature_dim));
  }
  if (model.trees.empty()) throw DataError("forest has no trees");
  int votes = 0;
  for (const auto& tree : model.trees) votes += tree.predict(features) > 0.5 ? 1 : 0;
  const double fraction = static_cast<double>(votes) / static_cast<double>(model.trees.size());
  return {fraction > 0.5, fraction};
}

std::string forest_to_string(const ForestModel& model) {
  nlohmann::json j;
  j["format"] = "cinemagraph-forest";
  j["version"] = 1;
  j["feature_dim"] = model.feature_dim;
  j["layout_version"] = model.layout_version;
  j["seed"] = model.seed;
  j["max_depth"] = model.max_depth;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_votes});
    }
    trees.push_back({{"nodes", nodes}});
  }
  j["trees"] = trees;
  return j.dump() + "\n";
}

ForestModel forest_from_string(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "cinemagraph-forest" || j.at("version") != 1) {
      throw DataError("not a version-1 forest model");
    }
    ForestModel model;
    model.feature_dim = j.at("feature_dim");
    model.layout_version = j.at("layout_version");
    model.seed = j.at("seed");
    model.max_depth = j.at("max_depth");
    for (const auto& t : j.at("trees")) {
      DecisionTree tree;
      for (const auto& n : t.at("nodes")) {
        tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                              n.at(3).get<int>(), n.at(4).get<double>()});
      }
      const int size = static_cast<int>(tree.nodes.size());
      for (const auto& n : tree.nodes) {
        if (n.feature >= model.feature_dim ||
            (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size))) {
          throw DataError("forest node references are out of range");
        }
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed forest model: ") + e.what());
  }
}

void save_forest(const std::filesystem::path& file, const ForestModel& model) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write model " + file.string());
  out << forest_to_string(model);
}

ForestModel load_forest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open model " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return forest_from_string(buffer.str());
}

}  // namespace cinemagraph
