#include "limeout/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "limeout/errors.hpp"
#include "limeout/rng.hpp"

namespace limeout {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::logistic: return "logistic";
    case Algorithm::tree: return "tree";
    case Algorithm::random_forest: return "random_forest";
    case Algorithm::bagging: return "bagging";
    case Algorithm::adaboost: return "adaboost";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : all_algorithms())
    if (algorithm_name(a) == name) return a;
  return std::nullopt;
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::logistic, Algorithm::tree, Algorithm::random_forest,
          Algorithm::bagging, Algorithm::adaboost};
}

namespace {

struct HyperRange {
  double fallback;
  bool integral;
  double min;
  double max;
};

const std::map<std::string, HyperRange>& hyper_ranges(Algorithm a) {
  static const std::map<std::string, HyperRange> logistic{
      {"l2", {1.0, false, 0.0, 1e12}},
      {"learning_rate", {0.1, false, 1e-12, 1e6}},
      {"max_iterations", {1000, true, 1, 1e9}},
      {"tolerance", {1e-6, false, 0.0, 1.0}},
  };
  static const std::map<std::string, HyperRange> tree{
      {"max_depth", {-1, true, -1, 1e6}},
      {"min_samples_split", {2, true, 2, 1e9}},
  };
  static const std::map<std::string, HyperRange> forest{
      {"tree_count", {100, true, 1, 1e6}},
      {"bootstrap", {1, true, 0, 1}},
      {"max_features", {0, true, 0, 1e6}},
      {"max_depth", {-1, true, -1, 1e6}},
      {"min_samples_split", {2, true, 2, 1e9}},
  };
  static const std::map<std::string, HyperRange> bagging{
      {"tree_count", {100, true, 1, 1e6}},
      {"bootstrap", {1, true, 0, 1}},
      {"max_depth", {-1, true, -1, 1e6}},
      {"min_samples_split", {2, true, 2, 1e9}},
  };
  static const std::map<std::string, HyperRange> adaboost{
      {"rounds", {50, true, 1, 1e6}},
      {"learning_rate", {1.0, false, 1e-12, 1e6}},
  };
  switch (a) {
    case Algorithm::logistic: return logistic;
    case Algorithm::tree: return tree;
    case Algorithm::random_forest: return forest;
    case Algorithm::bagging: return bagging;
    case Algorithm::adaboost: return adaboost;
  }
  return logistic;
}

}  // namespace

std::map<std::string, double> resolved_hyperparameters(
    const ClassifierSpec& spec) {
  const auto& ranges = hyper_ranges(spec.algorithm);
  std::map<std::string, double> out;
  for (const auto& [key, range] : ranges) out[key] = range.fallback;
  for (const auto& [key, value] : spec.hyper) {
    auto it = ranges.find(key);
    if (it == ranges.end())
      throw std::invalid_argument(
          "unknown hyperparameter '" + key + "' for algorithm " +
          std::string(algorithm_name(spec.algorithm)));
    const HyperRange& range = it->second;
    if (!std::isfinite(value) || value < range.min || value > range.max)
      throw std::invalid_argument("hyperparameter '" + key +
                                  "' out of range for algorithm " +
                                  std::string(algorithm_name(spec.algorithm)));
    if (range.integral && value != std::floor(value))
      throw std::invalid_argument("hyperparameter '" + key +
                                  "' must be an integer");
    out[key] = value;
  }
  return out;
}

void FeatureMask::validate(const Schema& schema) const {
  for (const auto& name : dropped)
    if (schema.feature_index(name) < 0)
      throw std::invalid_argument("mask names an unknown feature: " + name);
  if (dropped.size() >= schema.dimension())
    throw std::invalid_argument("mask would drop every feature");
}

std::vector<int> FeatureMask::active_features(const Schema& schema) const {
  std::vector<int> active;
  for (std::size_t f = 0; f < schema.dimension(); ++f)
    if (!contains(schema.features[f].name)) active.push_back(static_cast<int>(f));
  return active;
}

int Classifier::predict(std::span<const double> row) const {
  std::vector<double> proba = predict_proba(row);
  std::size_t best = 0;
  for (std::size_t k = 1; k < proba.size(); ++k)
    if (proba[k] > proba[best]) best = k;
  return static_cast<int>(best);
}

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

std::vector<double> logistic_proba(const LogisticParams& params,
                                   const std::vector<int>& active,
                                   std::span<const double> row,
                                   std::size_t num_classes) {
  std::vector<double> z(params.units.size(), 0.0);
  for (std::size_t u = 0; u < params.units.size(); ++u) {
    double score = params.units[u].intercept;
    for (std::size_t j = 0; j < active.size(); ++j) {
      double standardized =
          (row[active[j]] - params.mean[j]) / params.scale[j];
      score += params.units[u].weights[j] * standardized;
    }
    z[u] = score;
  }
  if (params.units.size() == 1) {
    double p1 = sigmoid(z[0]);
    return {1.0 - p1, p1};
  }
  std::vector<double> proba(num_classes, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < num_classes; ++k) {
    proba[k] = sigmoid(z[k]);
    total += proba[k];
  }
  for (double& p : proba) p /= total;
  return proba;
}

std::vector<double> average_tree_proba(const std::vector<DecisionTree>& trees,
                                       std::span<const double> row,
                                       std::size_t num_classes) {
  std::vector<double> proba(num_classes, 0.0);
  for (const DecisionTree& tree : trees) {
    auto dist = tree.leaf_distribution(row);
    for (std::size_t k = 0; k < num_classes; ++k) proba[k] += dist[k];
  }
  for (double& p : proba) p /= static_cast<double>(trees.size());
  return proba;
}

int tree_vote(const DecisionTree& tree, std::span<const double> row) {
  auto dist = tree.leaf_distribution(row);
  std::size_t best = 0;
  for (std::size_t k = 1; k < dist.size(); ++k)
    if (dist[k] > dist[best]) best = k;
  return static_cast<int>(best);
}

std::vector<double> adaboost_proba(const AdaBoostParams& params,
                                   std::span<const double> row,
                                   std::size_t num_classes) {
  std::vector<double> score(num_classes, 0.0);
  double total = 0.0;
  for (std::size_t m = 0; m < params.stumps.size(); ++m) {
    score[tree_vote(params.stumps[m], row)] += params.alphas[m];
    total += params.alphas[m];
  }
  for (double& s : score) s /= total;
  return score;
}

}  // namespace

std::vector<double> TrainedModel::predict_proba(
    std::span<const double> row) const {
  if (row.size() != schema_.dimension())
    throw std::invalid_argument("row width does not match model schema");
  std::size_t num_classes = schema_.num_classes();
  if (const auto* logistic = std::get_if<LogisticParams>(&params_))
    return logistic_proba(*logistic, mask_.active_features(schema_), row,
                          num_classes);
  if (const auto* tree = std::get_if<TreeParams>(&params_)) {
    auto dist = tree->tree.leaf_distribution(row);
    return {dist.begin(), dist.end()};
  }
  if (const auto* forest = std::get_if<ForestParams>(&params_))
    return average_tree_proba(forest->trees, row, num_classes);
  return adaboost_proba(std::get<AdaBoostParams>(params_), row, num_classes);
}

TrainedModel TrainedModel::from_parts(
    ClassifierSpec spec, FeatureMask mask, Schema schema,
    std::vector<std::vector<std::string>> code_tables, ModelParams params) {
  schema.validate();
  mask.validate(schema);
  if (code_tables.empty()) code_tables.resize(schema.dimension());
  if (code_tables.size() != schema.dimension())
    throw std::invalid_argument("one code table required per feature");
  TrainedModel model;
  model.spec_ = std::move(spec);
  model.mask_ = std::move(mask);
  model.schema_ = std::move(schema);
  model.code_tables_ = std::move(code_tables);
  model.params_ = std::move(params);
  return model;
}

namespace {

LogisticParams train_logistic(const Dataset& data,
                              const std::vector<int>& active,
                              const std::map<std::string, double>& hyper) {
  const std::size_t n = data.size();
  const std::size_t a = active.size();
  LogisticParams params;
  params.mean.assign(a, 0.0);
  params.scale.assign(a, 1.0);
  for (std::size_t j = 0; j < a; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += data.value(i, active[j]);
    params.mean[j] = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = data.value(i, active[j]) - params.mean[j];
      ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(n));
    params.scale[j] = sd > 0.0 ? sd : 1.0;
  }

  Matrix x(n, a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < a; ++j)
      x(i, j) = (data.value(i, active[j]) - params.mean[j]) / params.scale[j];

  double lambda = hyper.at("l2");
  double lr = hyper.at("learning_rate");
  int max_iterations = static_cast<int>(hyper.at("max_iterations"));
  double tolerance = hyper.at("tolerance");

  std::size_t num_classes = data.schema().num_classes();
  std::vector<int> sign(n);
  if (num_classes == 2) {
    for (std::size_t i = 0; i < n; ++i) sign[i] = data.label(i) == 1 ? 1 : -1;
    params.units.push_back(detail::fit_logistic_unit(
        x, sign, lambda, lr, max_iterations, tolerance));
  } else {
    for (std::size_t k = 0; k < num_classes; ++k) {
      for (std::size_t i = 0; i < n; ++i)
        sign[i] = static_cast<std::size_t>(data.label(i)) == k ? 1 : -1;
      params.units.push_back(detail::fit_logistic_unit(
          x, sign, lambda, lr, max_iterations, tolerance));
    }
  }
  return params;
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, SeededRng& rng) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = rng.below(n);
  return rows;
}

ForestParams train_forest(const Dataset& data, const std::vector<int>& active,
                          const std::map<std::string, double>& hyper,
                          std::uint64_t seed, bool subsample_features) {
  TreeOptions options;
  options.max_depth = static_cast<int>(hyper.at("max_depth"));
  options.min_samples_split = static_cast<int>(hyper.at("min_samples_split"));
  if (subsample_features) {
    int configured = static_cast<int>(hyper.at("max_features"));
    options.max_features =
        configured > 0
            ? configured
            : static_cast<int>(std::ceil(std::sqrt(
                  static_cast<double>(active.size()))));
    if (options.max_features >= static_cast<int>(active.size()))
      options.max_features = 0;  // whole set, skip sampling
  }
  bool bootstrap = hyper.at("bootstrap") != 0.0;
  int tree_count = static_cast<int>(hyper.at("tree_count"));

  std::vector<std::size_t> all_rows(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) all_rows[i] = i;

  ForestParams params;
  params.trees.reserve(tree_count);
  for (int t = 0; t < tree_count; ++t) {
    SeededRng rng(derive_seed(seed, seed_stream::kForestMember,
                              static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> rows =
        bootstrap ? bootstrap_rows(data.size(), rng) : all_rows;
    params.trees.push_back(
        detail::fit_tree(data, rows, {}, active, options, &rng));
  }
  return params;
}

AdaBoostParams train_adaboost(const Dataset& data,
                              const std::vector<int>& active,
                              const std::map<std::string, double>& hyper) {
  const std::size_t n = data.size();
  const std::size_t num_classes = data.schema().num_classes();
  int rounds = static_cast<int>(hyper.at("rounds"));
  double lr = hyper.at("learning_rate");

  TreeOptions stump_options;
  stump_options.max_depth = 1;

  std::vector<std::size_t> all_rows(n);
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));

  AdaBoostParams params;
  for (int r = 0; r < rounds; ++r) {
    DecisionTree stump =
        detail::fit_tree(data, all_rows, weights, active, stump_options,
                         nullptr);
    double err = 0.0;
    std::vector<int> wrong(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (tree_vote(stump, data.row(i)) != data.label(i)) {
        wrong[i] = 1;
        err += weights[i];
      }
    }
    if (err <= 0.0) {
      params.stumps.push_back(std::move(stump));
      params.alphas.push_back(1.0);
      break;
    }
    // SAMME keeps only learners better than random guessing.
    if (err >= 1.0 - 1.0 / static_cast<double>(num_classes)) break;
    double alpha = lr * (std::log((1.0 - err) / err) +
                         std::log(static_cast<double>(num_classes) - 1.0));
    params.stumps.push_back(std::move(stump));
    params.alphas.push_back(alpha);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (wrong[i]) weights[i] *= std::exp(alpha);
      total += weights[i];
    }
    for (double& w : weights) w /= total;
  }
  if (params.stumps.empty())
    throw TrainingError(
        "adaboost found no stump better than chance on the training data");
  return params;
}

}  // namespace

TrainedModel train(const ClassifierSpec& spec, const Dataset& data,
                   const FeatureMask& mask) {
  if (data.size() == 0) throw TrainingError("empty training data");
  std::size_t present = 0;
  for (std::size_t count : data.class_counts())
    if (count > 0) ++present;
  if (present < 2) throw TrainingError("single-class training data");
  try {
    mask.validate(data.schema());
  } catch (const std::invalid_argument& e) {
    throw TrainingError(e.what());
  }
  auto hyper = resolved_hyperparameters(spec);
  std::vector<int> active = mask.active_features(data.schema());

  ModelParams params{LogisticParams{}};
  switch (spec.algorithm) {
    case Algorithm::logistic:
      params = train_logistic(data, active, hyper);
      break;
    case Algorithm::tree: {
      std::vector<std::size_t> rows(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) rows[i] = i;
      TreeOptions options;
      options.max_depth = static_cast<int>(hyper.at("max_depth"));
      options.min_samples_split =
          static_cast<int>(hyper.at("min_samples_split"));
      params = TreeParams{detail::fit_tree(data, rows, {}, active, options,
                                           nullptr)};
      break;
    }
    case Algorithm::random_forest:
      params = train_forest(data, active, hyper, spec.seed, true);
      break;
    case Algorithm::bagging:
      params = train_forest(data, active, hyper, spec.seed, false);
      break;
    case Algorithm::adaboost:
      params = train_adaboost(data, active, hyper);
      break;
  }
  return TrainedModel::from_parts(spec, mask, data.schema(),
                                  data.code_tables(), std::move(params));
}

double accuracy(const Classifier& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("empty evaluation data");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (model.predict(data.row(i)) == data.label(i)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace limeout
