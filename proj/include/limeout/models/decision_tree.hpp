#pragma once

#include <span>
#include <vector>

#include "limeout/dataset.hpp"
#include "limeout/rng.hpp"

namespace limeout {

// One CART node.  Numeric split: rows with value <= split_value go left.
// Categorical split: rows with code == split_value go left.  Leaves carry
// the weighted class distribution of their training rows.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  bool categorical = false;
  double split_value = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> distribution;  // leaves only; sums to 1

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  std::span<const double> leaf_distribution(std::span<const double> row) const;
  int depth() const;
};

struct TreeOptions {
  int max_depth = -1;        // -1 = unlimited
  int min_samples_split = 2;
  int max_features = 0;      // per-split random subset; 0 = all features
};

namespace detail {

// Grows a CART tree on the given rows by greedy Gini impurity reduction.
// Numeric candidates are midpoints between consecutive distinct values;
// categorical candidates are one-vs-rest per code.  Ties keep the first
// candidate in scan order (features ascending, thresholds/codes ascending),
// so growth is deterministic.  `row_weights` may be empty (unweighted) or
// give one weight per dataset row.  `rng` is only consumed when
// max_features > 0, one subset per split in preorder.
DecisionTree fit_tree(const Dataset& data, std::span<const std::size_t> rows,
                      std::span<const double> row_weights,
                      std::span<const int> active_features,
                      const TreeOptions& options, SeededRng* rng);

}  // namespace detail

}  // namespace limeout
