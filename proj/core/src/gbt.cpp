// SPDX-License-Identifier: Apache-2.0
#include "lvsd/gbt.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "lvsd/rng.hpp"

namespace lvsd {
namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double structure_term(double g, double h, double lambda) { return g * g / (h + lambda); }

class TreeBuilder {
public:
  TreeBuilder(const std::vector<std::vector<double>>& features,
              const std::vector<double>& gradients, const std::vector<double>& hessians,
              const HyperParams& hyper, const std::vector<int>& feature_bag)
      : features_(features),
        gradients_(gradients),
        hessians_(hessians),
        hyper_(hyper),
        feature_bag_(feature_bag) {}

  Tree build(std::vector<int> rows) {
    Tree tree;
    grow(std::move(rows), 0, tree);
    return tree;
  }

private:
  int grow(std::vector<int> rows, int depth, Tree& tree) {
    double g_sum = 0.0;
    double h_sum = 0.0;
    for (const int row : rows) {
      g_sum += gradients_[row];
      h_sum += hessians_[row];
    }

    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    SplitChoice split;
    if (depth < hyper_.max_depth) {
      split = best_split(rows, g_sum, h_sum);
    }
    if (!split.found) {
      tree.nodes[node_index].weight = -g_sum / (h_sum + hyper_.lambda);
      return node_index;
    }

    std::vector<int> left_rows;
    std::vector<int> right_rows;
    for (const int row : rows) {
      (features_[row][split.feature] < split.threshold ? left_rows : right_rows).push_back(row);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[node_index].feature = split.feature;
    tree.nodes[node_index].threshold = split.threshold;
    const int left = grow(std::move(left_rows), depth + 1, tree);
    tree.nodes[node_index].left = left;
    const int right = grow(std::move(right_rows), depth + 1, tree);
    tree.nodes[node_index].right = right;
    return node_index;
  }

  SplitChoice best_split(const std::vector<int>& rows, double g_sum, double h_sum) const {
    SplitChoice best;
    if (rows.size() < 2) return best;
    const double parent_term = structure_term(g_sum, h_sum, hyper_.lambda);

    std::vector<std::pair<double, int>> ordered;
    ordered.reserve(rows.size());
    for (const int feature : feature_bag_) {
      ordered.clear();
      for (const int row : rows) {
        ordered.emplace_back(features_[row][feature], row);
      }
      std::sort(ordered.begin(), ordered.end());

      double g_left = 0.0;
      double h_left = 0.0;
      for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
        g_left += gradients_[ordered[i].second];
        h_left += hessians_[ordered[i].second];
        if (ordered[i].first == ordered[i + 1].first) continue;  // not a value boundary

        const double h_right = h_sum - h_left;
        if (h_left < hyper_.min_child_weight || h_right < hyper_.min_child_weight) continue;

        const double g_right = g_sum - g_left;
        const double gain = 0.5 * (structure_term(g_left, h_left, hyper_.lambda) +
                                   structure_term(g_right, h_right, hyper_.lambda) -
                                   parent_term) -
                            hyper_.gamma;
        if (gain <= 0.0) continue;

        const double threshold = 0.5 * (ordered[i].first + ordered[i + 1].first);
        const bool improves =
            gain > best.gain ||
            (gain == best.gain &&
             (feature < best.feature ||
              (feature == best.feature && threshold < best.threshold)));
        if (!best.found || improves) {
          best = SplitChoice{true, feature, threshold, gain};
        }
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>& features_;
  const std::vector<double>& gradients_;
  const std::vector<double>& hessians_;
  const HyperParams& hyper_;
  const std::vector<int>& feature_bag_;
};

double mean_squared_error(const std::vector<double>& targets,
                          const std::vector<double>& predictions,
                          const std::vector<int>& rows) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const int row : rows) {
    const double diff = targets[row] - predictions[row];
    sum += diff * diff;
  }
  return sum / static_cast<double>(rows.size());
}

/// Deterministic sampled subset: shuffle a copy, take round(fraction*n)
/// (at least 1), return ascending.
std::vector<int> sample_subset(const std::vector<int>& items, double fraction, Rng& rng) {
  if (fraction >= 1.0) return items;
  std::vector<int> bag = items;
  rng.shuffle(bag);
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(round_half_up(fraction * static_cast<double>(items.size()))));
  bag.resize(std::min(keep, bag.size()));
  std::sort(bag.begin(), bag.end());
  return bag;
}

nlohmann::json hyper_to_json(const HyperParams& h) {
  return nlohmann::json{{"rounds", h.rounds},
                        {"eta", h.eta},
                        {"max_depth", h.max_depth},
                        {"lambda", h.lambda},
                        {"gamma", h.gamma},
                        {"subsample", h.subsample},
                        {"colsample", h.colsample},
                        {"min_child_weight", h.min_child_weight},
                        {"seed", h.seed},
                        {"early_stopping_rounds", h.early_stopping_rounds},
                        {"validation_fraction", h.validation_fraction}};
}

HyperParams hyper_from_json(const nlohmann::json& doc) {
  HyperParams h;
  h.rounds = doc.at("rounds").get<int>();
  h.eta = doc.at("eta").get<double>();
  h.max_depth = doc.at("max_depth").get<int>();
  h.lambda = doc.at("lambda").get<double>();
  h.gamma = doc.at("gamma").get<double>();
  h.subsample = doc.at("subsample").get<double>();
  h.colsample = doc.at("colsample").get<double>();
  h.min_child_weight = doc.at("min_child_weight").get<double>();
  h.seed = doc.at("seed").get<std::uint64_t>();
  h.early_stopping_rounds = doc.at("early_stopping_rounds").get<int>();
  h.validation_fraction = doc.at("validation_fraction").get<double>();
  return h;
}

}  // namespace

void HyperParams::validate() const {
  if (rounds < 1) fail(ErrorKind::InvariantViolation, "rounds must be >= 1");
  if (!(eta > 0.0) || eta > 1.0) fail(ErrorKind::InvariantViolation, "eta must be in (0,1]");
  if (max_depth < 1) fail(ErrorKind::InvariantViolation, "max_depth must be >= 1");
  if (lambda < 0.0) fail(ErrorKind::InvariantViolation, "lambda must be >= 0");
  if (gamma < 0.0) fail(ErrorKind::InvariantViolation, "gamma must be >= 0");
  if (!(subsample > 0.0) || subsample > 1.0) {
    fail(ErrorKind::InvariantViolation, "subsample must be in (0,1]");
  }
  if (!(colsample > 0.0) || colsample > 1.0) {
    fail(ErrorKind::InvariantViolation, "colsample must be in (0,1]");
  }
  if (min_child_weight < 0.0) {
    fail(ErrorKind::InvariantViolation, "min_child_weight must be >= 0");
  }
  if (early_stopping_rounds < 0) {
    fail(ErrorKind::InvariantViolation, "early_stopping_rounds must be >= 0");
  }
  if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
    fail(ErrorKind::InvariantViolation, "validation_fraction must be in [0,1)");
  }
}

double Tree::leaf_weight(std::span<const double> x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    node = x[static_cast<std::size_t>(nodes[node].feature)] < nodes[node].threshold
               ? nodes[node].left
               : nodes[node].right;
  }
  return nodes[node].weight;
}

double Tree::max_abs_leaf_weight() const {
  double best = 0.0;
  for (const auto& node : nodes) {
    if (node.feature < 0) best = std::max(best, std::abs(node.weight));
  }
  return best;
}

GbtModel train(const std::vector<std::vector<double>>& features,
               const std::vector<double>& targets, const HyperParams& hyper,
               TrainReport* report) {
  hyper.validate();
  if (features.size() != targets.size()) {
    fail(ErrorKind::DimensionMismatch, "feature and target counts differ");
  }
  if (features.size() < 2) {
    fail(ErrorKind::EmptyDataset, "training needs at least 2 records");
  }
  const std::size_t dim = features.front().size();
  if (dim == 0) fail(ErrorKind::EmptyDataset, "feature dimension is zero");
  for (const auto& x : features) {
    if (x.size() != dim) fail(ErrorKind::DimensionMismatch, "inconsistent feature length");
  }
  for (const double y : targets) {
    if (y < 0.0) fail(ErrorKind::InvariantViolation, "targets must be non-negative");
  }

  GbtModel model;
  model.hyper = hyper;
  model.feature_dim = dim;

  // Validation carve-out for early stopping.
  std::vector<int> all_rows(features.size());
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<int> fit_rows = all_rows;
  std::vector<int> val_rows;
  if (hyper.early_stopping_rounds > 0 && hyper.validation_fraction > 0.0) {
    const auto val_count = static_cast<std::size_t>(
        hyper.validation_fraction * static_cast<double>(features.size()));
    if (val_count >= 1 && val_count < features.size() - 1) {
      Rng rng = derive_rng(hyper.seed, 0);
      std::vector<int> shuffled = all_rows;
      rng.shuffle(shuffled);
      val_rows.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(val_count));
      fit_rows.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(val_count), shuffled.end());
      std::sort(val_rows.begin(), val_rows.end());
      std::sort(fit_rows.begin(), fit_rows.end());
    }
  }

  double base = 0.0;
  for (const int row : fit_rows) base += targets[row];
  base /= static_cast<double>(fit_rows.size());
  model.base_score = base;

  std::vector<double> predictions(features.size(), base);
  std::vector<double> gradients(features.size(), 0.0);
  std::vector<double> hessians(features.size(), 2.0);

  std::vector<int> all_features(dim);
  std::iota(all_features.begin(), all_features.end(), 0);

  TrainReport local_report;
  TrainReport& rep = report ? *report : local_report;
  rep = TrainReport{};

  double best_val = std::numeric_limits<double>::infinity();
  int best_round = -1;

  for (int round = 0; round < hyper.rounds; ++round) {
    Rng row_rng = derive_rng(hyper.seed, 2 * static_cast<std::uint64_t>(round) + 1);
    Rng col_rng = derive_rng(hyper.seed, 2 * static_cast<std::uint64_t>(round) + 2);
    const std::vector<int> row_bag = sample_subset(fit_rows, hyper.subsample, row_rng);
    const std::vector<int> col_bag = sample_subset(all_features, hyper.colsample, col_rng);

    for (const int row : fit_rows) {
      gradients[row] = 2.0 * (predictions[row] - targets[row]);
    }

    TreeBuilder builder(features, gradients, hessians, hyper, col_bag);
    Tree tree = builder.build(row_bag);

    for (const int row : fit_rows) {
      predictions[row] += hyper.eta * tree.leaf_weight(features[row]);
    }
    for (const int row : val_rows) {
      predictions[row] += hyper.eta * tree.leaf_weight(features[row]);
    }
    model.trees.push_back(std::move(tree));
    rep.train_loss.push_back(mean_squared_error(targets, predictions, fit_rows));

    if (!val_rows.empty()) {
      const double val_loss = mean_squared_error(targets, predictions, val_rows);
      rep.validation_loss.push_back(val_loss);
      if (val_loss < best_val) {
        best_val = val_loss;
        best_round = round;
      } else if (round - best_round >= hyper.early_stopping_rounds) {
        break;
      }
    }
  }

  if (!val_rows.empty() && best_round >= 0) {
    model.trees.resize(static_cast<std::size_t>(best_round) + 1);
  }
  rep.kept_rounds = static_cast<int>(model.trees.size());
  return model;
}

double predict(const GbtModel& model, std::span<const double> x) {
  if (x.size() != model.feature_dim) {
    fail(ErrorKind::DimensionMismatch,
         "query has " + std::to_string(x.size()) + " features, model expects " +
             std::to_string(model.feature_dim));
  }
  double sum = model.base_score;
  for (const auto& tree : model.trees) {
    sum += model.hyper.eta * tree.leaf_weight(x);
  }
  return std::max(0.0, sum);
}

void save_model(const GbtModel& model, const std::string& path) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : tree.nodes) {
      nodes.push_back(nlohmann::json{{"feature", node.feature},
                                     {"threshold", node.threshold},
                                     {"left", node.left},
                                     {"right", node.right},
                                     {"weight", node.weight}});
    }
    trees.push_back(nlohmann::json{{"nodes", std::move(nodes)}});
  }
  nlohmann::json doc{{"format", "lvsd-gbt"},
                     {"version", 1},
                     {"feature_dim", model.feature_dim},
                     {"base_score", model.base_score},
                     {"hyper", hyper_to_json(model.hyper)},
                     {"trees", std::move(trees)}};
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot open '" + path + "' for writing");
  out << doc.dump(1) << '\n';
}

GbtModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::CorruptModel, "cannot open model '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
    if (doc.value("format", "") != "lvsd-gbt" || doc.value("version", 0) != 1) {
      fail(ErrorKind::CorruptModel, "'" + path + "' is not a lvsd-gbt v1 model");
    }
    GbtModel model;
    model.feature_dim = doc.at("feature_dim").get<std::size_t>();
    model.base_score = doc.at("base_score").get<double>();
    model.hyper = hyper_from_json(doc.at("hyper"));
    for (const auto& tree_doc : doc.at("trees")) {
      Tree tree;
      for (const auto& node_doc : tree_doc.at("nodes")) {
        TreeNode node;
        node.feature = node_doc.at("feature").get<int>();
        node.threshold = node_doc.at("threshold").get<double>();
        node.left = node_doc.at("left").get<int>();
        node.right = node_doc.at("right").get<int>();
        node.weight = node_doc.at("weight").get<double>();
        tree.nodes.push_back(node);
      }
      if (tree.nodes.empty()) fail(ErrorKind::CorruptModel, "empty tree in '" + path + "'");
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::CorruptModel, "'" + path + "': " + e.what());
  }
}

LinearModel train_linear(const std::vector<std::vector<double>>& features,
                         const std::vector<double>& targets) {
  if (features.empty() || features.size() != targets.size()) {
    fail(ErrorKind::EmptyDataset, "linear fit needs matching, non-empty records");
  }
  const std::size_t dim = features.front().size();
  const std::size_t cols = dim + 1;  // intercept last
  constexpr double kRidge = 1e-8;

  std::vector<double> normal(cols * cols, 0.0);
  std::vector<double> rhs(cols, 0.0);
  for (std::size_t rec = 0; rec < features.size(); ++rec) {
    if (features[rec].size() != dim) {
      fail(ErrorKind::DimensionMismatch, "inconsistent feature length");
    }
    const auto value_at = [&](std::size_t c) {
      return c < dim ? features[rec][c] : 1.0;
    };
    for (std::size_t i = 0; i < cols; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        normal[i * cols + j] += value_at(i) * value_at(j);
      }
      rhs[i] += value_at(i) * targets[rec];
    }
  }
  for (std::size_t i = 0; i < cols; ++i) normal[i * cols + i] += kRidge;

  // Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < cols; ++r) {
      if (std::abs(normal[r * cols + col]) > std::abs(normal[pivot * cols + col])) pivot = r;
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < cols; ++c) {
        std::swap(normal[col * cols + c], normal[pivot * cols + c]);
      }
      std::swap(rhs[col], rhs[pivot]);
    }
    const double diag = normal[col * cols + col];
    if (diag == 0.0) fail(ErrorKind::Internal, "singular normal equations");
    for (std::size_t r = col + 1; r < cols; ++r) {
      const double factor = normal[r * cols + col] / diag;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < cols; ++c) {
        normal[r * cols + c] -= factor * normal[col * cols + c];
      }
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> solution(cols, 0.0);
  for (std::size_t i = cols; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t c = i + 1; c < cols; ++c) acc -= normal[i * cols + c] * solution[c];
    solution[i] = acc / normal[i * cols + i];
  }

  LinearModel model;
  model.weights.assign(solution.begin(), solution.begin() + static_cast<std::ptrdiff_t>(dim));
  model.intercept = solution[dim];
  return model;
}

double predict_linear(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size()) {
    fail(ErrorKind::DimensionMismatch, "query does not match linear model dimension");
  }
  double sum = model.intercept;
  for (std::size_t i = 0; i < x.size(); ++i) sum += model.weights[i] * x[i];
  return sum;
}

void save_linear_model(const LinearModel& model, const std::string& path) {
  nlohmann::json doc{{"format", "lvsd-linear"},
                     {"version", 1},
                     {"weights", model.weights},
                     {"intercept", model.intercept}};
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot open '" + path + "' for writing");
  out << doc.dump(1) << '\n';
}

LinearModel load_linear_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::CorruptModel, "cannot open model '" + path + "'");
  try {
    nlohmann::json doc;
    in >> doc;
    if (doc.value("format", "") != "lvsd-linear" || doc.value("version", 0) != 1) {
      fail(ErrorKind::CorruptModel, "'" + path + "' is not a lvsd-linear v1 model");
    }
    LinearModel model;
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.intercept = doc.at("intercept").get<double>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::CorruptModel, "'" + path + "': " + e.what());
  }
}

}  // namespace lvsd
