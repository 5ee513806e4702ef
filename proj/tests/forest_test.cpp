#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fomlab/error.hpp"
#include "fomlab/forest.hpp"
#include "fomlab/random.hpp"
#include "fomlab/stats.hpp"

using namespace fomlab;

namespace {

Sample make_sample(const FeatureVector& f, double label, std::size_t i) {
  return Sample{f, label, "c" + std::to_string(1000 + i)};
}

// label 0 below depth 50, 0.8 from 50 on; other features are noise.
LabeledDataset step_dataset(std::size_t n, std::uint64_t seed, bool noisy_features) {
  Rng rng(seed);
  LabeledDataset data;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector f;
    if (noisy_features)
      for (auto& v : f.values) v = rng.uniform();
    const bool high = i % 2 == 0;
    f[feature::kDepth] = high ? 60.0 + static_cast<double>(rng.below(41)) : 10.0 + static_cast<double>(rng.below(31));
    data.samples.push_back(make_sample(f, high ? 0.8 : 0.0, i));
  }
  return data;
}

LabeledDataset smooth_dataset(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset data;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector f;
    for (auto& v : f.values) v = rng.uniform();
    f[3] = 5.0;  // constant column
    const double x = f[7];
    data.samples.push_back(make_sample(f, 0.3 * x * x + 0.4 * f[12] * (1 - x) + 0.05 * rng.uniform(), i));
  }
  return data;
}

HyperParams deep(std::size_t trees, std::size_t fps, std::uint64_t seed = 1) {
  HyperParams h;
  h.n_trees = trees;
  h.features_per_split = fps;
  h.seed = seed;
  return h;
}

std::vector<double> predictions(const ForestModel& m, const LabeledDataset& d) {
  std::vector<double> out;
  for (const auto& s : d.samples) out.push_back(predict(m, s.features));
  return out;
}

}  // namespace

TEST(Train, ConstantLabels) {
  LabeledDataset data;
  FeatureVector f;
  f[0] = 3;
  for (int i = 0; i < 8; ++i) data.samples.push_back(make_sample(f, 0.3, i));
  const auto model = train_forest(data, deep(10, 6));
  FeatureVector other;
  other.values.fill(42.0);
  EXPECT_DOUBLE_EQ(predict(model, other), 0.3);
  EXPECT_DOUBLE_EQ(predict(model, f), 0.3);
  for (double imp : model.importances) EXPECT_DOUBLE_EQ(imp, 1.0 / 30.0);
}

TEST(Train, StepFunctionOracle) {
  for (bool noisy : {false, true}) {
    const auto data = step_dataset(200, 5, noisy);
    const auto model = train_forest(data, deep(50, noisy ? 30 : 6));
    for (const auto& s : data.samples) EXPECT_NEAR(predict(model, s.features), s.label, 1e-9);
    EXPECT_GT(model.importances[feature::kDepth], 0.95);
    EXPECT_NEAR(std::accumulate(model.importances.begin(), model.importances.end(), 0.0), 1.0, 1e-9);

    FeatureVector held_out;
    if (noisy) held_out.values.fill(0.5);
    held_out[feature::kDepth] = 95;
    EXPECT_NEAR(predict(model, held_out), 0.8, 0.05);
    held_out[feature::kDepth] = 12;
    EXPECT_NEAR(predict(model, held_out), 0.0, 0.05);
  }
}

TEST(Train, SameSeedIsBitIdentical) {
  const auto data = smooth_dataset(150, 3);
  const auto a = train_forest(data, deep(30, 6, 9));
  const auto b = train_forest(data, deep(30, 6, 9));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_NE(a, train_forest(data, deep(30, 6, 10)));
}

TEST(Train, Errors) {
  EXPECT_THROW(train_forest(LabeledDataset{}, deep(1, 6)), Error);
  auto data = smooth_dataset(10, 1);
  data.schema_hash = "foreign";
  try {
    train_forest(data, deep(1, 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SchemaMismatch);
  }
  auto bad = smooth_dataset(10, 1);
  bad.samples[0].label = 1.5;
  EXPECT_THROW(train_forest(bad, deep(1, 6)), Error);
  HyperParams h = deep(1, 31);
  EXPECT_THROW(h.validate(), Error);
  h = deep(1, 6);
  h.min_samples_split = 1;
  EXPECT_THROW(h.validate(), Error);
  h = deep(0, 6);
  EXPECT_THROW(h.validate(), Error);
}

TEST(Predict, HandBuiltSingleSplit) {
  ForestModel m;
  m.schema_hash = feature_schema_hash();
  m.label_min = 0.1;
  m.label_max = 0.7;
  RegressionTree t;
  t.nodes = {{4, 2.5, 0.4, 1, 2}, {-1, 0, 0.1, -1, -1}, {-1, 0, 0.7, -1, -1}};
  m.trees.push_back(t);
  FeatureVector f;
  f[4] = 2.5;
  EXPECT_EQ(predict(m, f), 0.1);
  f[4] = 2.6;
  EXPECT_EQ(predict(m, f), 0.7);
  m.schema_hash = "other";
  EXPECT_THROW(predict(m, f), Error);
}

TEST(Model, JsonRoundTrip) {
  const auto model = train_forest(smooth_dataset(80, 2), deep(5, 6));
  const auto back = ForestModel::from_json(model.to_json());
  EXPECT_EQ(back, model);
  EXPECT_THROW(ForestModel::from_json("{\"format\": \"other\"}"), Error);
}

TEST(Split, Examples) {
  const auto ten = smooth_dataset(10, 4);
  auto [train, test] = split_train_test(ten, 0.2, 3);
  EXPECT_EQ(train.size(), 8u);
  EXPECT_EQ(test.size(), 2u);
  std::set<std::string> ids;
  for (const auto& s : train.samples) ids.insert(s.circuit_id);
  for (const auto& s : test.samples) EXPECT_TRUE(ids.insert(s.circuit_id).second);
  EXPECT_EQ(ids.size(), 10u);
  auto again = split_train_test(ten, 0.2, 3);
  EXPECT_EQ(again.first, train);
  EXPECT_EQ(again.second, test);

  const auto two = smooth_dataset(2, 4);
  auto [a, b] = split_train_test(two, 0.5, 0);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(b.size(), 1u);

  try {
    split_train_test(two, 0.1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSplit);
  }
  EXPECT_THROW(split_train_test(ten, 1.0, 0), Error);
}

TEST(GridSearch, SinglePointAndTies) {
  const auto data = smooth_dataset(60, 8);
  const auto one = grid_search_cv(data, {deep(10, 6)}, 3, 1);
  EXPECT_EQ(one.best, deep(10, 6));
  ASSERT_EQ(one.cv_scores.size(), 1u);
  EXPECT_EQ(one.best_score, one.cv_scores[0].second);

  HyperParams first = deep(10, 6);
  HyperParams twin = first;
  const auto tie = grid_search_cv(data, {first, twin}, 3, 1);
  EXPECT_EQ(tie.cv_scores[0].second, tie.cv_scores[1].second);
  EXPECT_EQ(tie.best, first);
  try {
    grid_search_cv(smooth_dataset(2, 1), {first}, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewSamples);
  }
}

TEST(GridSearch, DeepBeatsShallowOnMonotoneOracle) {
  Rng rng(12);
  LabeledDataset data;
  for (std::size_t i = 0; i < 150; ++i) {
    FeatureVector f;
    for (auto& v : f.values) v = rng.uniform();
    data.samples.push_back(make_sample(f, f[9], i));
  }
  HyperParams shallow = deep(20, 30);
  shallow.max_depth = 1;
  const HyperParams unbounded = deep(20, 30);
  const auto result = grid_search_cv(data, {shallow, unbounded}, 3, 4);
  EXPECT_EQ(result.best, unbounded);
  EXPECT_GE(result.best_score, 0.99);
  EXPECT_GT(result.cv_scores[1].second, result.cv_scores[0].second);
}

TEST(Grid, DefaultAndJson) {
  const auto grid = default_grid(5);
  EXPECT_EQ(grid.size(), 81u);
  for (const auto& h : grid) EXPECT_EQ(h.seed, 5u);
  const auto axes = grid_from_json(R"({"n_trees": [10, 20], "max_depth": [4, null], "min_samples_leaf": [1],
                                       "min_samples_split": [2, 4]})", 3);
  EXPECT_EQ(axes.size(), 8u);
  const auto points = grid_from_json(R"([{"n_trees": 7, "max_depth": null, "features_per_split": 30}])", 3);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0].n_trees, 7u);
  EXPECT_FALSE(points[0].max_depth.has_value());
  EXPECT_EQ(points[0].features_per_split, 30u);
  EXPECT_THROW(grid_from_json("[]", 1), Error);
}

TEST(Properties, BaggingBoundAndLabelRange) {
  const auto data = smooth_dataset(120, 21);
  const auto model = train_forest(data, deep(25, 6));
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    FeatureVector f;
    for (auto& v : f.values) v = rng.uniform() * 1.4 - 0.2;
    double lo = 1e9, hi = -1e9;
    for (const auto& t : model.trees) {
      lo = std::min(lo, t.predict(f));
      hi = std::max(hi, t.predict(f));
    }
    const double p = predict(model, f);
    EXPECT_GE(p, lo - 1e-15);
    EXPECT_LE(p, hi + 1e-15);
    EXPECT_GE(p, model.label_min);
    EXPECT_LE(p, model.label_max);
  }
}

TEST(Properties, RowOrderDoesNotMatter) {
  const auto data = smooth_dataset(100, 6);
  auto shuffled = data;
  Rng rng(3);
  rng.shuffle(shuffled.samples);
  const auto a = train_forest(data, deep(15, 6));
  const auto b = train_forest(shuffled, deep(15, 6));
  EXPECT_EQ(predictions(a, data), predictions(b, data));
}

TEST(Properties, LabelShiftShiftsPredictions) {
  const auto data = smooth_dataset(100, 13);
  auto shifted = data;
  for (auto& s : shifted.samples) s.label += 0.25;
  const auto a = train_forest(data, deep(15, 6));
  const auto b = train_forest(shifted, deep(15, 6));
  const auto pa = predictions(a, data), pb = predictions(b, data);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_NEAR(pb[i], pa[i] + 0.25, 1e-9);
  EXPECT_EQ(a.trees.size(), b.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    ASSERT_EQ(a.trees[t].nodes.size(), b.trees[t].nodes.size());
    for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
      EXPECT_EQ(a.trees[t].nodes[k].feature, b.trees[t].nodes[k].feature);
      EXPECT_EQ(a.trees[t].nodes[k].threshold, b.trees[t].nodes[k].threshold);
    }
  }
}

TEST(Properties, ConstantFeatureHasZeroImportance) {
  const auto model = train_forest(smooth_dataset(120, 17), deep(20, 6));
  EXPECT_EQ(model.importances[3], 0.0);
  for (double v : model.importances) EXPECT_GE(v, 0.0);
}

TEST(Properties, SingleDeepTreeFitsExactFunction) {
  // Four regions with 30 duplicates each; the label is a function of two features.
  LabeledDataset data;
  for (std::size_t i = 0; i < 120; ++i) {
    FeatureVector f;
    const std::size_t region = i % 4;
    f[2] = static_cast<double>(region / 2);
    f[8] = static_cast<double>(region % 2);
    data.samples.push_back(make_sample(f, 0.1 + 0.2 * static_cast<double>(region), i));
  }
  const auto model = train_forest(data, deep(1, 30, 4));
  for (const auto& s : data.samples) EXPECT_NEAR(predict(model, s.features), s.label, 1e-12);
}

TEST(Properties, LeafValuesWithinBootstrapRange) {
  const auto data = smooth_dataset(90, 29);
  const auto model = train_forest(data, deep(10, 6));
  const auto labels = data.labels();
  const double lo = *std::min_element(labels.begin(), labels.end());
  const double hi = *std::max_element(labels.begin(), labels.end());
  for (const auto& t : model.trees)
    for (const auto& n : t.nodes)
      if (n.feature < 0) {
        EXPECT_GE(n.value, lo);
        EXPECT_LE(n.value, hi);
      }
}
