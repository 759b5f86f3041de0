#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "limeout/dataset.hpp"
#include "limeout/matrix.hpp"
#include "limeout/models/params.hpp"

namespace limeout {

enum class Algorithm { logistic, tree, random_forest, bagging, adaboost };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::vector<Algorithm> all_algorithms();

// Training recipe: which algorithm, hyperparameter overrides by name, and
// the seed that drives every random choice the trainer makes.
struct ClassifierSpec {
  Algorithm algorithm = Algorithm::logistic;
  std::map<std::string, double> hyper;
  std::uint64_t seed = 0;
};

// Defaults merged with the spec's overrides.  Throws std::invalid_argument
// for a hyperparameter the algorithm does not define or a value outside its
// legal range.
std::map<std::string, double> resolved_hyperparameters(
    const ClassifierSpec& spec);

// Features excluded from training.  A trained model with a mask ignores the
// masked slots entirely: predictions cannot depend on them.
struct FeatureMask {
  std::set<std::string> dropped;

  bool empty() const { return dropped.empty(); }
  bool contains(const std::string& name) const {
    return dropped.count(name) > 0;
  }
  // Throws std::invalid_argument when a name is not in the schema or the
  // mask would drop every feature.
  void validate(const Schema& schema) const;
  // Indices of the features that remain active, ascending.
  std::vector<int> active_features(const Schema& schema) const;
};

// Anything that can score a row: trained models, ensembles, or test stubs.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual const Schema& schema() const = 0;

  // Probability per class index, non-negative, summing to 1.  Throws
  // std::invalid_argument when the row width does not match the schema.
  virtual std::vector<double> predict_proba(std::span<const double> row) const = 0;

  // Argmax class index; ties resolve to the lower index.
  int predict(std::span<const double> row) const;
};

class TrainedModel final : public Classifier {
 public:
  const Schema& schema() const override { return schema_; }
  std::vector<double> predict_proba(std::span<const double> row) const override;

  const ClassifierSpec& spec() const { return spec_; }
  const FeatureMask& mask() const { return mask_; }
  const ModelParams& params() const { return params_; }
  // Training-time categorical encodings, kept so later data can be checked
  // against the codes the model was fitted on.
  const std::vector<std::vector<std::string>>& code_tables() const {
    return code_tables_;
  }

  // Assembles a model from already-built parts (deserialization, tests).
  static TrainedModel from_parts(ClassifierSpec spec, FeatureMask mask,
                                 Schema schema,
                                 std::vector<std::vector<std::string>> code_tables,
                                 ModelParams params);

 private:
  TrainedModel() = default;

  ClassifierSpec spec_;
  FeatureMask mask_;
  Schema schema_;
  std::vector<std::vector<std::string>> code_tables_;
  ModelParams params_;
};

// Trains a model of the requested kind on the dataset, honoring the mask.
// Deterministic in (spec, data, mask).  Throws TrainingError on empty data,
// single-class training data, or an empty active feature set.
TrainedModel train(const ClassifierSpec& spec, const Dataset& data,
                   const FeatureMask& mask = {});

// Fraction of rows whose predicted class matches the label.
double accuracy(const Classifier& model, const Dataset& data);

namespace detail {

// L2-regularized logistic log-loss and its gradient, exposed for gradient
// checking.  X is n x d (already standardized), sign[i] is +1/-1, and the
// penalty (lambda/(2n))*||w||^2 excludes the intercept.
struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_intercept = 0.0;
};
LossGrad logistic_loss_grad(const Matrix& x, std::span<const int> sign,
                            std::span<const double> weights, double intercept,
                            double lambda);

// Batch gradient descent on the loss above.
LogisticUnit fit_logistic_unit(const Matrix& x, std::span<const int> sign,
                               double lambda, double learning_rate,
                               int max_iterations, double tolerance);

}  // namespace detail

}  // namespace limeout
