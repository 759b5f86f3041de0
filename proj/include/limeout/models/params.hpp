#pragma once

#include <variant>
#include <vector>

#include "limeout/models/decision_tree.hpp"

namespace limeout {

// One binary logistic unit over the active (standardized) features.
struct LogisticUnit {
  std::vector<double> weights;
  double intercept = 0.0;
};

struct LogisticParams {
  // Standardization over active features, captured from the training split.
  std::vector<double> mean;
  std::vector<double> scale;
  // Binary: one unit scoring class index 1.  Multiclass: one unit per class
  // (one-vs-rest), normalized at prediction time.
  std::vector<LogisticUnit> units;
};

struct TreeParams {
  DecisionTree tree;
};

struct ForestParams {
  std::vector<DecisionTree> trees;
};

struct AdaBoostParams {
  std::vector<DecisionTree> stumps;
  std::vector<double> alphas;
};

using ModelParams =
    std::variant<LogisticParams, TreeParams, ForestParams, AdaBoostParams>;

}  // namespace limeout
