#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "limeout/lime.hpp"

namespace limeout {

// Stacked local explanations: W(i, j) is candidate i's contribution for
// feature j, zero when the feature missed that explanation's top-k.
struct ExplanationMatrix {
  Matrix contributions;                      // m x d
  std::vector<std::string> feature_names;    // d
  std::vector<std::size_t> candidate_rows;   // m, row ids in the source data
  std::vector<double> local_r2;              // m
};

// Explains every candidate row with a per-row derived seed.
ExplanationMatrix build_explanation_matrix(const Classifier& model,
                                           const Dataset& candidates,
                                           const FeatureStats& stats,
                                           const SurrogateConfig& config,
                                           const KernelConfig& kernel = {});

// Greedy submodular pick.  Feature importance I_j = sqrt(sum_i |W(i,j)|);
// coverage of a set V is the summed importance of features that some
// member of V uses (nonzero entry).  Each step adds the candidate with the
// largest coverage gain (ties -> lower index) and stops at `budget` picks
// or when no candidate adds coverage.
std::vector<std::size_t> submodular_pick(const Matrix& contributions,
                                         int budget);

struct GlobalFeature {
  std::string feature;
  double mean_signed = 0.0;
  double mean_abs = 0.0;
  double stderr_signed = 0.0;  // sample SE of the signed contributions
};

// Features ranked by mean absolute contribution over the picked
// explanations (ties -> schema order).
struct GlobalExplanation {
  std::vector<GlobalFeature> ranked;
  std::vector<std::size_t> picked;  // indices into the matrix rows
  int budget = 0;
};

GlobalExplanation aggregate_global(const ExplanationMatrix& matrix,
                                   const std::vector<std::size_t>& picked);

// Convenience wrapper: matrix -> pick -> aggregate.
GlobalExplanation global_explanation(const Classifier& model,
                                     const Dataset& candidates,
                                     const FeatureStats& stats,
                                     const SurrogateConfig& config,
                                     const KernelConfig& kernel = {},
                                     int budget = 15);

}  // namespace limeout
