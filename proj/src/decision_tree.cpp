#include "limeout/models/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace limeout {

std::span<const double> DecisionTree::leaf_distribution(
    std::span<const double> row) const {
  if (nodes.empty()) throw std::invalid_argument("empty tree");
  int at = 0;
  while (!nodes[at].is_leaf()) {
    const TreeNode& node = nodes[at];
    bool go_left;
    if (node.categorical)
      go_left = row[node.feature] == node.split_value;
    else
      go_left = row[node.feature] <= node.split_value;
    at = go_left ? node.left : node.right;
  }
  return nodes[at].distribution;
}

int DecisionTree::depth() const {
  std::function<int(int)> walk = [&](int at) -> int {
    if (nodes[at].is_leaf()) return 0;
    return 1 + std::max(walk(nodes[at].left), walk(nodes[at].right));
  };
  return nodes.empty() ? 0 : walk(0);
}

namespace detail {
namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  bool categorical = false;
  double split_value = 0.0;
  double score = 0.0;  // summed weighted child impurity, lower is better
};

// W * Gini(W) computed from per-class weight sums: W - sum_k w_k^2 / W.
double impurity_sum(std::span<const double> class_weights, double total) {
  if (total <= 0.0) return 0.0;
  double sq = 0.0;
  for (double w : class_weights) sq += w * w;
  return total - sq / total;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::span<const double> row_weights,
              std::span<const int> active, const TreeOptions& options,
              SeededRng* rng)
      : data_(data),
        row_weights_(row_weights),
        active_(active.begin(), active.end()),
        options_(options),
        rng_(rng),
        num_classes_(data.schema().num_classes()) {}

  DecisionTree build(std::vector<std::size_t> rows) {
    DecisionTree tree;
    grow(tree, std::move(rows), 0);
    return tree;
  }

 private:
  double weight_of(std::size_t row) const {
    return row_weights_.empty() ? 1.0 : row_weights_[row];
  }

  std::vector<int> split_candidates() {
    if (options_.max_features <= 0 ||
        static_cast<std::size_t>(options_.max_features) >= active_.size())
      return active_;
    std::vector<int> pool = active_;
    std::size_t want = static_cast<std::size_t>(options_.max_features);
    for (std::size_t i = 0; i < want; ++i) {
      std::size_t j = i + rng_->below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(want);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  // Best split over one numeric feature: midpoints between consecutive
  // distinct values, scanned in ascending order.
  void scan_numeric(int feature, std::span<const std::size_t> rows,
                    double parent_total, SplitChoice& best) {
    struct Entry {
      double value;
      int label;
      double weight;
    };
    std::vector<Entry> entries;
    entries.reserve(rows.size());
    for (std::size_t i : rows)
      entries.push_back({data_.value(i, feature), data_.label(i), weight_of(i)});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.value < b.value; });

    std::vector<double> left(num_classes_, 0.0);
    std::vector<double> right(num_classes_, 0.0);
    double left_total = 0.0, right_total = parent_total;
    for (const Entry& e : entries) right[e.label] += e.weight;

    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
      left[entries[i].label] += entries[i].weight;
      right[entries[i].label] -= entries[i].weight;
      left_total += entries[i].weight;
      right_total -= entries[i].weight;
      if (entries[i].value == entries[i + 1].value) continue;
      if (left_total <= 0.0 || right_total <= 0.0) continue;
      double score = impurity_sum(left, left_total) +
                     impurity_sum(right, right_total);
      if (!best.found || score < best.score) {
        best.found = true;
        best.feature = feature;
        best.categorical = false;
        best.split_value = (entries[i].value + entries[i + 1].value) / 2.0;
        best.score = score;
      }
    }
  }

  // Best one-vs-rest split over a categorical feature, codes ascending.
  void scan_categorical(int feature, std::span<const std::size_t> rows,
                        std::span<const double> parent_weights,
                        double parent_total, SplitChoice& best) {
    std::size_t codes = data_.code_table(feature).size();
    std::vector<double> per_code(codes * num_classes_, 0.0);
    std::vector<double> code_total(codes, 0.0);
    for (std::size_t i : rows) {
      std::size_t code = static_cast<std::size_t>(data_.value(i, feature));
      per_code[code * num_classes_ + data_.label(i)] += weight_of(i);
      code_total[code] += weight_of(i);
    }
    std::vector<double> rest(num_classes_);
    for (std::size_t c = 0; c < codes; ++c) {
      if (code_total[c] <= 0.0 || code_total[c] >= parent_total) continue;
      for (std::size_t k = 0; k < num_classes_; ++k)
        rest[k] = parent_weights[k] - per_code[c * num_classes_ + k];
      double score =
          impurity_sum({per_code.data() + c * num_classes_, num_classes_},
                       code_total[c]) +
          impurity_sum(rest, parent_total - code_total[c]);
      if (!best.found || score < best.score) {
        best.found = true;
        best.feature = feature;
        best.categorical = true;
        best.split_value = static_cast<double>(c);
        best.score = score;
      }
    }
  }

  int grow(DecisionTree& tree, std::vector<std::size_t> rows, int depth) {
    std::vector<double> class_weights(num_classes_, 0.0);
    double total = 0.0;
    for (std::size_t i : rows) {
      class_weights[data_.label(i)] += weight_of(i);
      total += weight_of(i);
    }

    int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    bool pure = false;
    for (double w : class_weights)
      if (w == total && total > 0.0) pure = true;

    bool depth_capped = options_.max_depth >= 0 && depth >= options_.max_depth;
    bool too_small =
        rows.size() < static_cast<std::size_t>(options_.min_samples_split);

    SplitChoice best;
    if (!pure && !depth_capped && !too_small && total > 0.0) {
      for (int feature : split_candidates()) {
        if (data_.schema().features[feature].kind == FeatureKind::categorical)
          scan_categorical(feature, rows, class_weights, total, best);
        else
          scan_numeric(feature, rows, total, best);
      }
      // Require a real impurity improvement so unseparable nodes terminate.
      if (best.found && best.score >= impurity_sum(class_weights, total) - 1e-12)
        best.found = false;
    }

    if (!best.found) {
      TreeNode& leaf = tree.nodes[index];
      leaf.distribution.assign(num_classes_, 0.0);
      if (total > 0.0) {
        for (std::size_t k = 0; k < num_classes_; ++k)
          leaf.distribution[k] = class_weights[k] / total;
      } else {
        for (std::size_t k = 0; k < num_classes_; ++k)
          leaf.distribution[k] = 1.0 / static_cast<double>(num_classes_);
      }
      return index;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t i : rows) {
      double v = data_.value(i, best.feature);
      bool go_left =
          best.categorical ? v == best.split_value : v <= best.split_value;
      (go_left ? left_rows : right_rows).push_back(i);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[index].feature = best.feature;
    tree.nodes[index].categorical = best.categorical;
    tree.nodes[index].split_value = best.split_value;
    int left = grow(tree, std::move(left_rows), depth + 1);
    tree.nodes[index].left = left;
    int right = grow(tree, std::move(right_rows), depth + 1);
    tree.nodes[index].right = right;
    return index;
  }

  const Dataset& data_;
  std::span<const double> row_weights_;
  std::vector<int> active_;
  const TreeOptions& options_;
  SeededRng* rng_;
  std::size_t num_classes_;
};

}  // namespace

DecisionTree fit_tree(const Dataset& data, std::span<const std::size_t> rows,
                      std::span<const double> row_weights,
                      std::span<const int> active_features,
                      const TreeOptions& options, SeededRng* rng) {
  if (rows.empty()) throw std::invalid_argument("cannot grow a tree on no rows");
  if (active_features.empty())
    throw std::invalid_argument("cannot grow a tree with no features");
  if (options.max_features > 0 && rng == nullptr)
    throw std::invalid_argument("feature subsampling requires a random source");
  TreeBuilder builder(data, row_weights, active_features, options, rng);
  return builder.build({rows.begin(), rows.end()});
}

}  // namespace detail
}  // namespace limeout
