#include "fomlab/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fomlab/error.hpp"
#include "fomlab/parallel.hpp"
#include "fomlab/random.hpp"
#include "fomlab/stats.hpp"
#include "json.hpp"

namespace fomlab {

using nlohmann::json;

std::vector<double> LabeledDataset::labels() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

void LabeledDataset::validate() const {
  if (schema_hash != feature_schema_hash()) {
    throw Error(ErrorKind::SchemaMismatch, "dataset schema " + schema_hash + " does not match " +
                                               feature_schema_hash());
  }
  for (const auto& s : samples) {
    if (!(s.label >= 0.0 && s.label <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "label of " + s.circuit_id + " is outside [0, 1]");
    }
    for (double v : s.features.values) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite feature in " + s.circuit_id);
    }
  }
}

void HyperParams::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (n_trees == 0) bad("n_trees must be positive");
  if (max_depth && *max_depth == 0) bad("max_depth must be positive");
  if (min_samples_leaf == 0) bad("min_samples_leaf must be positive");
  if (min_samples_split < 2) bad("min_samples_split must be at least 2");
  if (features_per_split == 0 || features_per_split > kFeatureCount) {
    bad("features_per_split must be in [1, " + std::to_string(kFeatureCount) + "]");
  }
}

std::string HyperParams::describe() const {
  std::ostringstream out;
  out << "n_trees=" << n_trees << " max_depth=" << (max_depth ? std::to_string(*max_depth) : "none")
      << " min_samples_leaf=" << min_samples_leaf << " min_samples_split=" << min_samples_split
      << " features_per_split=" << features_per_split;
  return out.str();
}

double RegressionTree::predict(const FeatureVector& features) const {
  std::size_t at = 0;
  while (nodes[at].feature >= 0) {
    const auto& node = nodes[at];
    at = static_cast<std::size_t>(features[static_cast<std::size_t>(node.feature)] <= node.threshold
                                      ? node.left
                                      : node.right);
  }
  return nodes[at].value;
}

namespace {

struct TreeBuilder {
  const std::vector<const Sample*>& rows;
  const HyperParams& hyper;
  Rng& rng;
  RegressionTree tree;
  std::array<double, kFeatureCount> importance{};

  // Scratch reused across nodes.
  std::vector<std::pair<double, double>> column;
  std::array<std::size_t, kFeatureCount> feature_pool{};

  int build(std::vector<std::uint32_t>& idx, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double sum = 0.0;
    for (auto i : idx) sum += rows[i]->label;
    const double n = static_cast<double>(idx.size());
    tree.nodes[id].value = sum / n;

    const double first = rows[idx[0]]->label;
    const bool constant = std::all_of(idx.begin(), idx.end(), [&](auto i) { return rows[i]->label == first; });
    if (constant || idx.size() < hyper.min_samples_split || (hyper.max_depth && depth >= *hyper.max_depth)) {
      // Pure nodes take the exact label so the leaf value is not a rounded mean.
      if (constant) tree.nodes[id].value = first;
      return id;
    }

    // Sample candidate features without replacement, then scan in index order.
    std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
    auto draw = [&](std::size_t k) { std::swap(feature_pool[k], feature_pool[k + rng.below(kFeatureCount - k)]); };
    for (std::size_t k = 0; k < hyper.features_per_split; ++k) draw(k);
    std::sort(feature_pool.begin(), feature_pool.begin() + static_cast<std::ptrdiff_t>(hyper.features_per_split));

    const double mean = sum / n;
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    const std::size_t leaf = hyper.min_samples_leaf;
    auto scan = [&](std::size_t f) {
      column.clear();
      for (auto i : idx) column.emplace_back(rows[i]->features[f], rows[i]->label - mean);
      std::sort(column.begin(), column.end());
      double left_dev = 0.0;
      for (std::size_t i = 1; i < column.size(); ++i) {
        left_dev += column[i - 1].second;
        if (column[i].first == column[i - 1].first) continue;
        if (i < leaf || column.size() - i < leaf) continue;
        const double nl = static_cast<double>(i);
        const double nr = n - nl;
        // Drop in the sum of squared deviations, n_l n_r / n (mean_l - mean_r)^2.
        const double gain = left_dev * left_dev * n / (nl * nr);
        // Gains equal up to rounding count as ties and keep the earlier candidate.
        if (gain > 0.0 && gain > best_gain * (1.0 + 1e-9)) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          const double lo = column[i - 1].first;
          const double hi = column[i].first;
          double mid = lo + (hi - lo) / 2.0;
          if (!(mid < hi)) mid = lo;
          best_threshold = mid;
        }
      }
    };
    for (std::size_t k = 0; k < hyper.features_per_split; ++k) scan(feature_pool[k]);
    // Like common CART implementations, keep drawing features while none of
    // the sampled ones admits a split.
    for (std::size_t k = hyper.features_per_split; best_feature < 0 && k < kFeatureCount; ++k) {
      draw(k);
      scan(feature_pool[k]);
    }
    if (best_feature < 0) return id;

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    for (auto i : idx) {
      (rows[i]->features[static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    importance[static_cast<std::size_t>(best_feature)] += best_gain;
    tree.nodes[id].feature = best_feature;
    tree.nodes[id].threshold = best_threshold;
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    tree.nodes[id].left = l;
    tree.nodes[id].right = r;
    return id;
  }
};

std::vector<const Sample*> canonical_rows(const LabeledDataset& data) {
  std::vector<const Sample*> rows;
  rows.reserve(data.size());
  for (const auto& s : data.samples) rows.push_back(&s);
  std::sort(rows.begin(), rows.end(), [](const Sample* a, const Sample* b) {
    if (a->circuit_id != b->circuit_id) return a->circuit_id < b->circuit_id;
    if (a->features.values != b->features.values) return a->features.values < b->features.values;
    return a->label < b->label;
  });
  return rows;
}

json hyper_to_json(const HyperParams& h) {
  json doc;
  doc["n_trees"] = h.n_trees;
  doc["max_depth"] = h.max_depth ? json(*h.max_depth) : json(nullptr);
  doc["min_samples_leaf"] = h.min_samples_leaf;
  doc["min_samples_split"] = h.min_samples_split;
  doc["features_per_split"] = h.features_per_split;
  doc["seed"] = h.seed;
  return doc;
}

HyperParams hyper_from_json(const json& doc) {
  HyperParams h;
  h.n_trees = doc.at("n_trees").get<std::size_t>();
  if (!doc.at("max_depth").is_null()) h.max_depth = doc.at("max_depth").get<std::size_t>();
  h.min_samples_leaf = doc.at("min_samples_leaf").get<std::size_t>();
  h.min_samples_split = doc.at("min_samples_split").get<std::size_t>();
  h.features_per_split = doc.at("features_per_split").get<std::size_t>();
  h.seed = doc.at("seed").get<std::uint64_t>();
  return h;
}

}  // namespace

ForestModel train_forest(const LabeledDataset& data, const HyperParams& hyper) {
  if (data.empty()) throw Error(ErrorKind::EmptyDataset, "cannot train on an empty dataset");
  data.validate();
  hyper.validate();
  const auto rows = canonical_rows(data);
  const auto n = static_cast<std::uint32_t>(rows.size());

  ForestModel model;
  model.hyper = hyper;
  model.schema_hash = data.schema_hash;
  const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(),
                                            [](const Sample* a, const Sample* b) { return a->label < b->label; });
  model.label_min = (*lo)->label;
  model.label_max = (*hi)->label;
  model.trees.resize(hyper.n_trees);
  std::vector<std::array<double, kFeatureCount>> per_tree(hyper.n_trees);

  parallel_for(hyper.n_trees, [&](std::size_t t) {
    Rng rng(derive_seed(hyper.seed, t));
    std::vector<std::uint32_t> bootstrap(n);
    for (auto& i : bootstrap) i = static_cast<std::uint32_t>(rng.below(n));
    TreeBuilder builder{rows, hyper, rng, {}, {}, {}, {}};
    builder.build(bootstrap, 0);
    model.trees[t] = std::move(builder.tree);
    per_tree[t] = builder.importance;
  });

  double total = 0.0;
  for (const auto& imp : per_tree) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) model.importances[f] += imp[f];
  }
  for (double v : model.importances) total += v;
  for (auto& v : model.importances) v = total > 0.0 ? v / total : 1.0 / static_cast<double>(kFeatureCount);
  return model;
}

double predict(const ForestModel& model, const FeatureVector& features) {
  if (model.schema_hash != feature_schema_hash()) {
    throw Error(ErrorKind::SchemaMismatch, "model schema " + model.schema_hash + " does not match " +
                                               feature_schema_hash());
  }
  if (model.trees.empty()) throw Error(ErrorKind::InvalidArgument, "model has no trees");
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += tree.predict(features);
  return std::clamp(sum / static_cast<double>(model.trees.size()), model.label_min, model.label_max);
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data, double test_fraction,
                                                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "test fraction must lie in (0, 1)");
  }
  const std::size_t n = data.size();
  const auto cut = static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - test_fraction)));
  if (n < 2 || cut == 0 || cut >= n) {
    throw Error(ErrorKind::DegenerateSplit, "splitting " + std::to_string(n) + " samples at fraction " +
                                                std::to_string(test_fraction) + " leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0x5a17));
  rng.shuffle(order);
  LabeledDataset train;
  LabeledDataset test;
  train.schema_hash = test.schema_hash = data.schema_hash;
  for (std::size_t i = 0; i < n; ++i) {
    (i < cut ? train : test).samples.push_back(data.samples[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

GridSearchResult grid_search_cv(const LabeledDataset& train, const std::vector<HyperParams>& grid,
                                std::size_t folds, std::uint64_t seed) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "hyperparameter grid is empty");
  if (folds < 2) throw Error(ErrorKind::InvalidArgument, "need at least two folds");
  if (train.size() < folds) {
    throw Error(ErrorKind::TooFewSamples, std::to_string(train.size()) + " samples cannot fill " +
                                              std::to_string(folds) + " folds");
  }
  const std::size_t n = train.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0xf01d));
  rng.shuffle(order);

  std::vector<std::pair<LabeledDataset, LabeledDataset>> splits(folds);
  for (std::size_t k = 0; k < folds; ++k) {
    const std::size_t begin = n * k / folds;
    const std::size_t end = n * (k + 1) / folds;
    auto& [fit, held] = splits[k];
    fit.schema_hash = held.schema_hash = train.schema_hash;
    for (std::size_t i = 0; i < n; ++i) {
      ((i >= begin && i < end) ? held : fit).samples.push_back(train.samples[order[i]]);
    }
  }

  std::vector<double> scores(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t g) {
    double total = 0.0;
    for (const auto& [fit, held] : splits) {
      const ForestModel model = train_forest(fit, grid[g]);
      std::vector<double> predicted;
      predicted.reserve(held.size());
      for (const auto& s : held.samples) predicted.push_back(predict(model, s.features));
      const auto labels = held.labels();
      try {
        total += pearson(labels, predicted);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::TooFewSamples) throw;
      }
    }
    scores[g] = total / static_cast<double>(folds);
  });

  GridSearchResult result;
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    result.cv_scores.emplace_back(grid[g], scores[g]);
    if (scores[g] > scores[best]) best = g;
  }
  result.best = grid[best];
  result.best_score = scores[best];
  return result;
}

std::vector<HyperParams> default_grid(std::uint64_t seed) {
  std::vector<HyperParams> grid;
  for (std::size_t trees : {50, 100, 200}) {
    for (std::optional<std::size_t> depth : {std::optional<std::size_t>(8), std::optional<std::size_t>(16),
                                             std::optional<std::size_t>()}) {
      for (std::size_t leaf : {1, 2, 4}) {
        for (std::size_t split : {2, 5, 10}) {
          HyperParams h;
          h.n_trees = trees;
          h.max_depth = depth;
          h.min_samples_leaf = leaf;
          h.min_samples_split = split;
          h.seed = seed;
          grid.push_back(h);
        }
      }
    }
  }
  return grid;
}

std::vector<HyperParams> grid_from_json(const std::string& text, std::uint64_t seed) {
  // Either an explicit list of points or {"n_trees": [...], "max_depth": [...], ...}.
  std::vector<HyperParams> grid;
  try {
    const json doc = json::parse(text);
    if (doc.is_array()) {
      for (const auto& point : doc) {
        json filled = hyper_to_json(HyperParams{});
        filled["seed"] = seed;
        for (const auto& [k, v] : point.items()) filled[k] = v;
        grid.push_back(hyper_from_json(filled));
      }
    } else {
      const HyperParams base;
      auto axis = [&](const char* key, json fallback) {
        return doc.contains(key) ? doc.at(key) : json::array({fallback});
      };
      const json base_json = hyper_to_json(base);
      for (const auto& trees : axis("n_trees", base_json["n_trees"])) {
        for (const auto& depth : axis("max_depth", base_json["max_depth"])) {
          for (const auto& leaf : axis("min_samples_leaf", base_json["min_samples_leaf"])) {
            for (const auto& split : axis("min_samples_split", base_json["min_samples_split"])) {
              for (const auto& fps : axis("features_per_split", base_json["features_per_split"])) {
                json point = {{"n_trees", trees},       {"max_depth", depth},
                              {"min_samples_leaf", leaf}, {"min_samples_split", split},
                              {"features_per_split", fps}, {"seed", seed}};
                grid.push_back(hyper_from_json(point));
              }
            }
          }
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed grid JSON: ") + e.what());
  }
  for (const auto& h : grid) h.validate();
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "hyperparameter grid is empty");
  return grid;
}

std::string ForestModel::to_json() const {
  json doc;
  doc["format"] = "fomlab-forest";
  doc["version"] = 1;
  doc["schema_hash"] = schema_hash;
  doc["hyper"] = hyper_to_json(hyper);
  doc["importances"] = importances;
  doc["label_range"] = {label_min, label_max};
  json trees_json = json::array();
  for (const auto& tree : trees) {
    json t;
    std::vector<int> feature, left, right;
    std::vector<double> threshold, value;
    for (const auto& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      value.push_back(node.value);
      left.push_back(node.left);
      right.push_back(node.right);
    }
    t["feature"] = feature;
    t["threshold"] = threshold;
    t["value"] = value;
    t["left"] = left;
    t["right"] = right;
    trees_json.push_back(std::move(t));
  }
  doc["trees"] = std::move(trees_json);
  return doc.dump() + "\n";
}

ForestModel ForestModel::from_json(const std::string& text) {
  ForestModel model;
  try {
    const json doc = json::parse(text);
    if (doc.value("format", std::string()) != "fomlab-forest") {
      throw Error(ErrorKind::InvalidArgument, "not a forest model document");
    }
    if (doc.at("version").get<int>() != 1) {
      throw Error(ErrorKind::InvalidArgument, "unsupported model version");
    }
    model.schema_hash = doc.at("schema_hash").get<std::string>();
    model.hyper = hyper_from_json(doc.at("hyper"));
    model.importances = doc.at("importances").get<std::array<double, kFeatureCount>>();
    model.label_min = doc.at("label_range").at(0).get<double>();
    model.label_max = doc.at("label_range").at(1).get<double>();
    for (const auto& t : doc.at("trees")) {
      RegressionTree tree;
      const auto feature = t.at("feature").get<std::vector<int>>();
      const auto threshold = t.at("threshold").get<std::vector<double>>();
      const auto value = t.at("value").get<std::vector<double>>();
      const auto left = t.at("left").get<std::vector<int>>();
      const auto right = t.at("right").get<std::vector<int>>();
      const std::size_t size = feature.size();
      if (threshold.size() != size || value.size() != size || left.size() != size || right.size() != size ||
          size == 0) {
        throw Error(ErrorKind::InvalidArgument, "inconsistent tree arrays");
      }
      for (std::size_t i = 0; i < size; ++i) {
        if (feature[i] >= static_cast<int>(kFeatureCount) ||
            (feature[i] >= 0 && (left[i] <= static_cast<int>(i) || right[i] <= static_cast<int>(i) ||
                                 left[i] >= static_cast<int>(size) || right[i] >= static_cast<int>(size)))) {
          throw Error(ErrorKind::InvalidArgument, "malformed tree node");
        }
        tree.nodes.push_back({feature[i], threshold[i], value[i], left[i], right[i]});
      }
      model.trees.push_back(std::move(tree));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed model JSON: ") + e.what());
  }
  return model;
}

ForestModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ForestModel::from_json(buffer.str());
}

}  // namespace fomlab
