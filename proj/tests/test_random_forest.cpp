#include <doctest.h>

#include <cmath>

#include "cinemagraph/errors.hpp"
#include "cinemagraph/random_forest.hpp"
#include "cinemagraph/rng.hpp"
#include "fixtures.hpp"

using namespace cinemagraph;

namespace {

struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<std::uint8_t> y;
};

/// Two classes in 141 dimensions; the first 30 features carry a shifted mean.
Dataset separable(std::uint64_t seed, int n) {
  Rng rng(seed);
  Dataset d;
  for (int i = 0; i < n; ++i) {
    const std::uint8_t label = static_cast<std::uint8_t>(i % 2);
    std::vector<double> row(141);
    for (int j = 0; j < 141; ++j) row[j] = rng.normal() + (j < 30 && label ? 2.5 : 0.0);
    d.x.push_back(std::move(row));
    d.y.push_back(label);
  }
  return d;
}

}  // namespace

TEST_CASE("forest structure follows the parameters") {
  const auto d = separable(1, 200);
  const auto model = train_forest(d.x, d.y, {100, 10, 2, 0, 7});
  CHECK(model.trees.size() == 100);
  CHECK(model.feature_dim == 141);
  for (const auto& t : model.trees) {
    CHECK(t.depth() <= 10);
    for (const auto& n : t.nodes) {
      if (n.feature < 0) {
        CHECK(n.leaf_votes >= 0.0);
        CHECK(n.leaf_votes <= 1.0);
      } else {
        CHECK(n.left > 0);
        CHECK(n.right > 0);
      }
    }
  }
  const auto shallow = train_forest(d.x, d.y, {5, 2, 2, 0, 7});
  for (const auto& t : shallow.trees) CHECK(t.depth() <= 2);
}

TEST_CASE("holdout accuracy on a separable set") {
  const auto train = separable(2, 400);
  const auto test = separable(3, 400);
  const auto model = train_forest(train.x, train.y, {100, 10, 2, 0, 1});
  int correct = 0;
  for (std::size_t i = 0; i < test.x.size(); ++i) {
    correct += classify(model, test.x[i]).label == (test.y[i] == 1);
  }
  CHECK(correct >= 380);
}

TEST_CASE("training is deterministic and thread independent") {
  const auto d = separable(4, 120);
  const auto a = train_forest(d.x, d.y, {20, 6, 2, 0, 7});
  const auto b = train_forest(d.x, d.y, {20, 6, 2, 0, 7});
  const auto serial = train_forest(d.x, d.y, {20, 6, 2, 0, 7}, 0, Execution::serial);
  CHECK(forest_to_string(a) == forest_to_string(b));
  CHECK(forest_to_string(a) == forest_to_string(serial));
  const auto other = train_forest(d.x, d.y, {20, 6, 2, 0, 8});
  CHECK(forest_to_string(a) != forest_to_string(other));
}

TEST_CASE("vote fraction above one half is positive") {
  ForestModel m;
  m.feature_dim = 1;
  for (double v : {1.0, 1.0, 0.0, 0.0}) {
    DecisionTree t;
    TreeNode leaf;
    leaf.leaf_votes = v;
    t.nodes.push_back(leaf);
    m.trees.push_back(t);
  }
  const std::vector<double> x{0.0};
  CHECK(classify(m, x).vote_fraction == 0.5);
  CHECK_FALSE(classify(m, x).label);
  m.trees[2].nodes[0].leaf_votes = 1.0;
  CHECK(classify(m, x).label);
  const std::vector<double> wrong{0.0, 1.0};
  CHECK_THROWS_AS(classify(m, wrong), DataError);
}

TEST_CASE("serialization round trip") {
  const auto d = separable(5, 80);
  const auto model = train_forest(d.x, d.y, {10, 5, 2, 0, 3}, 1);
  const auto text = forest_to_string(model);
  const auto back = forest_from_string(text);
  CHECK(back == model);
  CHECK(forest_to_string(back) == text);
  const auto dir = fixtures::temp_dir("forest");
  save_forest(dir / "m.json", model);
  CHECK(load_forest(dir / "m.json") == model);
  CHECK_THROWS_AS(forest_from_string("[]"), DataError);
  CHECK_THROWS_AS(load_forest(dir / "nope.json"), DataError);
}

TEST_CASE("training input validation") {
  std::vector<std::vector<double>> x{{0.0}, {1.0}};
  std::vector<std::uint8_t> same{1, 1};
  CHECK_THROWS_AS(train_forest(x, same, {}), DataError);
  std::vector<std::uint8_t> short_labels{1};
  CHECK_THROWS_AS(train_forest(x, short_labels, {}), DataError);
}
