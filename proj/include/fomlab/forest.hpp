#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fomlab/features.hpp"

namespace fomlab {

struct Sample {
  FeatureVector features;
  double label = 0.0;  // Hellinger distance
  std::string circuit_id;

  bool operator==(const Sample&) const = default;
};

struct LabeledDataset {
  std::vector<Sample> samples;
  std::string schema_hash = feature_schema_hash();

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  std::vector<double> labels() const;

  /// Throws on a foreign schema, non-finite features or labels outside [0, 1].
  void validate() const;

  bool operator==(const LabeledDataset&) const = default;
};

struct HyperParams {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  // nullopt = unbounded
  std::size_t min_samples_leaf = 1;
  std::size_t min_samples_split = 2;
  std::size_t features_per_split = 6;
  std::uint64_t seed = 0;

  void validate() const;
  std::string describe() const;
  bool operator==(const HyperParams&) const = default;
};

/// Flat binary tree; node 0 is the root. Leaves have feature == -1.
struct RegressionTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;

    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;

  /// Walks left when features[feature] <= threshold.
  double predict(const FeatureVector& features) const;
  bool operator==(const RegressionTree&) const = default;
};

struct ForestModel {
  std::vector<RegressionTree> trees;
  HyperParams hyper;
  std::array<double, kFeatureCount> importances{};
  std::string schema_hash;
  double label_min = 0.0;
  double label_max = 0.0;

  std::string to_json() const;
  static ForestModel from_json(const std::string& text);
  bool operator==(const ForestModel&) const = default;
};

ForestModel load_model(const std::string& path);

/// Bagged CART regression forest. Samples are first put into a canonical
/// order, so the result depends on the dataset contents and the seed only.
ForestModel train_forest(const LabeledDataset& data, const HyperParams& hyper);

/// Mean leaf value over the trees.
double predict(const ForestModel& model, const FeatureVector& features);

/// Seeded shuffle, split at round(size * (1 - test_fraction)).
std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           double test_fraction, std::uint64_t seed);

struct GridSearchResult {
  HyperParams best;
  double best_score = 0.0;
  std::vector<std::pair<HyperParams, double>> cv_scores;  // grid order
};

/// k-fold cross validation scored by the mean validation Pearson
/// correlation; constant-prediction folds score 0, ties keep grid order.
GridSearchResult grid_search_cv(const LabeledDataset& train, const std::vector<HyperParams>& grid,
                                std::size_t folds, std::uint64_t seed);

/// n_trees x max_depth x min_samples_leaf x min_samples_split, 81 points.
std::vector<HyperParams> default_grid(std::uint64_t seed);

std::vector<HyperParams> grid_from_json(const std::string& text, std::uint64_t seed);

}  // namespace fomlab
