#pragma once

#include <cstdint>
#include <vector>

#include "limeout/dataset.hpp"

namespace limeout {

// Synthetic dataset with a known amount of label bias planted on binary
// sensitive features.  Each row draws:
//   s_j  ~ Bernoulli(1/2)                      (categorical, codes 0/1)
//   u    = redundancy * zbar + sqrt(1 - redundancy^2) * eps
//          with zbar = sum_j (2 s_j - 1) / sqrt(m),  eps ~ N(0,1)
//   noise_i ~ N(0,1)
//   label ~ Bernoulli(sigmoid(sum_j strength_j * s_j + 2 u))
// so u is a legitimate numeric signal correlated with the sensitive
// features at level `redundancy`, and each strength_j controls how much
// the label leans on s_j directly.
struct PlantedBiasOptions {
  std::size_t rows = 1000;
  int noise_features = 5;
  std::vector<double> bias_strengths = {1.0};  // one entry per sensitive feature
  double redundancy = 0.0;                     // in [0, 1]
  std::uint64_t seed = 0;
};

// Feature order: s (or s_0..s_{m-1}), u, noise_0..; target column "label"
// with classes "0", "1".  Throws std::invalid_argument on bad ranges
// (rows < 100, empty strengths, negative strength, redundancy outside
// [0,1], negative noise feature count).
Dataset generate_planted_bias(const PlantedBiasOptions& options);

// Single sensitive feature convenience overload.
Dataset generate_planted_bias(std::size_t rows, int noise_features,
                              double bias_strength, double redundancy,
                              std::uint64_t seed);

}  // namespace limeout
