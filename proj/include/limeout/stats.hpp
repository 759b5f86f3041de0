#pragma once

#include <span>
#include <vector>

#include "limeout/dataset.hpp"

namespace limeout {

// Per-feature training statistics used by the neighborhood sampler.
// Numeric features carry mean, population standard deviation and bins-1
// quantile boundaries (non-decreasing; degenerate features collapse).
// Categorical features carry the empirical probability of each code.
struct FeatureStats {
  struct PerFeature {
    FeatureKind kind = FeatureKind::numeric;
    // numeric
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> boundaries;
    // categorical: indexed by code, sums to 1 over codes seen in training
    std::vector<double> frequency;
  };

  int bins = 4;
  std::vector<PerFeature> features;
};

// Computes stats over the given dataset (normally the training split).
// bins must be >= 2.  Quantiles use linear interpolation at fractional
// rank q*(n-1) over the sorted values.
FeatureStats compute_stats(const Dataset& data, int bins = 4);

// Bin index of one numeric value: the first j with v <= boundaries[j],
// else bins-1.  Bins are right-closed.
int discretize_value(double v, std::span<const double> boundaries);

// Bin index per numeric feature, categorical code per categorical feature.
std::vector<int> discretize(std::span<const double> row,
                            const FeatureStats& stats);

}  // namespace limeout
