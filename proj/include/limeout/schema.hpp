#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace limeout {

enum class FeatureKind { numeric, categorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;

  bool operator==(const FeatureSpec&) const = default;
};

// Column layout of a dataset: ordered features, the target name, and the
// ordered class labels.  Label order is fixed at load time and defines the
// class indices used everywhere else.
struct Schema {
  std::vector<FeatureSpec> features;
  std::string target;
  std::vector<std::string> class_labels;

  bool operator==(const Schema&) const = default;

  std::size_t dimension() const { return features.size(); }
  std::size_t num_classes() const { return class_labels.size(); }

  // Index of a feature by name, or -1 when absent.
  int feature_index(std::string_view name) const {
    for (std::size_t i = 0; i < features.size(); ++i)
      if (features[i].name == name) return static_cast<int>(i);
    return -1;
  }

  // Throws std::invalid_argument when structurally unsound: duplicate or
  // empty names, a target that collides with a feature, fewer than two
  // class labels, or no features at all.
  void validate() const;
};

}  // namespace limeout
