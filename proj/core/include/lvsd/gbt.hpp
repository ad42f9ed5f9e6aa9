// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lvsd/errors.hpp"

namespace lvsd {

/// Booster settings. Defaults follow the reference configuration:
/// eta 0.1, max_depth 16, lambda 3, gamma 0.1, subsample 0.7,
/// colsample 0.7, min_child_weight 3, seed 1000. Round count and early
/// stopping are exposed as knobs; min_child_weight compares against the
/// hessian sum of a child (2 per sample for squared error).
struct HyperParams {
  int rounds = 300;
  double eta = 0.1;
  int max_depth = 16;
  double lambda = 3.0;
  double gamma = 0.1;
  double subsample = 0.7;
  double colsample = 0.7;
  double min_child_weight = 3.0;
  std::uint64_t seed = 1000;
  int early_stopping_rounds = 30;    // 0 disables early stopping
  double validation_fraction = 0.1;  // 0 disables the carve-out

  void validate() const;
};

/// Binary regression tree node; feature == -1 marks a leaf. Leaf weights
/// are stored unscaled; eta is applied at prediction time.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  [[nodiscard]] double leaf_weight(std::span<const double> x) const;
  [[nodiscard]] double max_abs_leaf_weight() const;
};

struct GbtModel {
  HyperParams hyper;
  std::size_t feature_dim = 0;
  double base_score = 0.0;
  std::vector<Tree> trees;
};

struct TrainReport {
  std::vector<double> train_loss;       // mean squared error per round
  std::vector<double> validation_loss;  // empty without a carve-out
  int kept_rounds = 0;
};

/// Second-order boosting with squared-error loss (g = 2(pred-y), h = 2),
/// exact greedy splits over sorted unique feature values, leaf weight
/// -G/(H+lambda), gain 0.5*(GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)) - gamma.
/// Deterministic for a fixed seed. Ties between equal-gain splits resolve
/// to the lowest feature index, then the lowest threshold.
GbtModel train(const std::vector<std::vector<double>>& features,
               const std::vector<double>& targets, const HyperParams& hyper,
               TrainReport* report = nullptr);

/// base_score + eta * sum of leaf weights, clamped at 0.
double predict(const GbtModel& model, std::span<const double> x);

void save_model(const GbtModel& model, const std::string& path);
GbtModel load_model(const std::string& path);

/// Ordinary least squares with a tiny ridge term for conditioning.
struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
};

LinearModel train_linear(const std::vector<std::vector<double>>& features,
                         const std::vector<double>& targets);
double predict_linear(const LinearModel& model, std::span<const double> x);

void save_linear_model(const LinearModel& model, const std::string& path);
LinearModel load_linear_model(const std::string& path);

}  // namespace lvsd
