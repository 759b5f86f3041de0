#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "limeout/classifier.hpp"
#include "limeout/matrix.hpp"
#include "limeout/stats.hpp"

namespace limeout {

// Exponential locality kernel over binary neighborhood vectors.
struct KernelConfig {
  double sigma = 0.0;  // <= 0 means "use default_sigma(d)"
};

// 0.75 * sqrt(d), the kernel width used when none is configured.
double default_sigma(std::size_t dimension);

// exp(-D^2 / sigma^2) where D is the Euclidean distance between the two
// binary vectors (so D^2 counts disagreeing slots).
double kernel_weight(std::span<const double> a, std::span<const double> b,
                     double sigma);

struct SurrogateConfig {
  int n_samples = 5000;
  double lambda = 1e-3;
  int top_k = 10;
  std::uint64_t seed = 0;
};

// A sampled neighborhood around one instance.  Row i of `binary` is the
// interpretable encoding of sample i (slot j is 1 iff the sample landed in
// the explained instance's bin/code for feature j); row i of `continuous`
// is the reconstructed row the black box was scored on.  Row 0 is always
// the explained instance itself.
struct Neighborhood {
  Matrix binary;
  Matrix continuous;
  std::vector<double> weights;
  std::vector<double> model_outputs;  // P(explained class) per sample
  int explained_class = 0;
};

// Draws n_samples perturbed neighbors.  Numeric features: a uniform bin,
// then a value from the training normal truncated to that bin (100
// rejected draws fall back to the bin midpoint; the open edge bins use the
// first boundary and last boundary + stddev).  Categorical features: a code
// drawn from the training frequencies.  Degenerate numeric features
// (stddev 0) always reproduce the training mean and match the instance's
// bin.  When explained_class is absent the model's predicted class of x is
// explained.  Throws std::invalid_argument when n_samples < d + 2 or the
// row width mismatches the stats.
Neighborhood sample_neighborhood(const Classifier& model,
                                 std::span<const double> x,
                                 const FeatureStats& stats,
                                 const SurrogateConfig& config,
                                 const KernelConfig& kernel = {},
                                 std::optional<int> explained_class = {});

struct RidgeFit {
  std::vector<double> coefficients;
  double intercept = 0.0;
  double local_r2 = 0.0;
};

// Weighted ridge regression with an unpenalized intercept:
//   min_{c,b} sum_i w_i (y_i - c.x_i - b)^2 + lambda * ||c||^2
// solved exactly via the normal equations (LU with partial pivoting).
// local_r2 is the weighted R^2 of the fit; a weighted target variance
// below 1e-18 reports R^2 = 1.  Throws std::invalid_argument when fewer
// than d+1 samples carry positive weight; throws
// DegenerateNeighborhoodError when the system is singular and lambda == 0.
RidgeFit solve_weighted_ridge(const Matrix& x, std::span<const double> y,
                              std::span<const double> weights, double lambda);

RidgeFit fit_surrogate(const Neighborhood& neighborhood, double lambda);

// One local explanation: the top-k interpretable contributions.
struct Explanation {
  std::vector<double> instance;
  int explained_class = 0;
  std::string explained_label;
  double predicted_probability = 0.0;  // model's P(explained class) at x
  std::vector<std::pair<std::string, double>> contributions;  // by |value| desc
  double intercept = 0.0;
  double local_r2 = 0.0;
  double sigma = 0.0;
  SurrogateConfig config;
};

Explanation explain_instance(const Classifier& model, std::span<const double> x,
                             const FeatureStats& stats,
                             const SurrogateConfig& config,
                             const KernelConfig& kernel = {},
                             std::optional<int> explained_class = {});

}  // namespace limeout
