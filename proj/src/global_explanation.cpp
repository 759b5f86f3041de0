#include "limeout/global_explanation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "limeout/rng.hpp"

namespace limeout {

ExplanationMatrix build_explanation_matrix(const Classifier& model,
                                           const Dataset& candidates,
                                           const FeatureStats& stats,
                                           const SurrogateConfig& config,
                                           const KernelConfig& kernel) {
  if (candidates.size() == 0)
    throw std::invalid_argument("no candidate rows to explain");
  const Schema& schema = model.schema();
  ExplanationMatrix out;
  out.contributions = Matrix(candidates.size(), schema.dimension());
  for (const auto& f : schema.features) out.feature_names.push_back(f.name);
  out.candidate_rows.resize(candidates.size());
  out.local_r2.resize(candidates.size());

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    SurrogateConfig per_row = config;
    per_row.seed = derive_seed(config.seed, seed_stream::kInstance, i);
    Explanation explanation =
        explain_instance(model, candidates.row(i), stats, per_row, kernel);
    out.candidate_rows[i] = i;
    out.local_r2[i] = explanation.local_r2;
    for (const auto& [name, value] : explanation.contributions) {
      int f = schema.feature_index(name);
      out.contributions(i, static_cast<std::size_t>(f)) = value;
    }
  }
  return out;
}

std::vector<std::size_t> submodular_pick(const Matrix& contributions,
                                         int budget) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  const std::size_t m = contributions.rows();
  const std::size_t d = contributions.cols();
  if (m == 0) throw std::invalid_argument("empty explanation matrix");

  // Global column importance I_j = sqrt(sum_i |W(i,j)|).
  std::vector<double> importance(d, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j)
      importance[j] += std::abs(contributions(i, j));
  for (double& v : importance) v = std::sqrt(v);

  std::vector<std::size_t> picked;
  std::vector<char> chosen(m, 0);
  std::vector<char> covered(d, 0);
  while (picked.size() < static_cast<std::size_t>(budget) &&
         picked.size() < m) {
    double best_gain = 0.0;
    std::size_t best_row = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (chosen[i]) continue;
      double gain = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        if (!covered[j] && contributions(i, j) != 0.0) gain += importance[j];
      if (best_row == m || gain > best_gain) {
        best_gain = gain;
        best_row = i;
      }
    }
    if (best_row == m || best_gain <= 0.0) break;  // nothing left to cover
    chosen[best_row] = 1;
    picked.push_back(best_row);
    for (std::size_t j = 0; j < d; ++j)
      if (contributions(best_row, j) != 0.0) covered[j] = 1;
  }
  return picked;
}

GlobalExplanation aggregate_global(const ExplanationMatrix& matrix,
                                   const std::vector<std::size_t>& picked) {
  if (picked.empty()) throw std::invalid_argument("no picked explanations");
  const std::size_t d = matrix.contributions.cols();
  const double b = static_cast<double>(picked.size());

  GlobalExplanation out;
  out.picked = picked;
  out.budget = static_cast<int>(picked.size());
  out.ranked.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    GlobalFeature& feature = out.ranked[j];
    feature.feature = matrix.feature_names[j];
    double sum = 0.0, abs_sum = 0.0;
    for (std::size_t i : picked) {
      double v = matrix.contributions(i, j);
      sum += v;
      abs_sum += std::abs(v);
    }
    feature.mean_signed = sum / b;
    feature.mean_abs = abs_sum / b;
    if (picked.size() > 1) {
      double ss = 0.0;
      for (std::size_t i : picked) {
        double delta = matrix.contributions(i, j) - feature.mean_signed;
        ss += delta * delta;
      }
      feature.stderr_signed = std::sqrt(ss / (b - 1.0)) / std::sqrt(b);
    }
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const GlobalFeature& a, const GlobalFeature& b) {
                     return a.mean_abs > b.mean_abs;
                   });
  return out;
}

GlobalExplanation global_explanation(const Classifier& model,
                                     const Dataset& candidates,
                                     const FeatureStats& stats,
                                     const SurrogateConfig& config,
                                     const KernelConfig& kernel, int budget) {
  ExplanationMatrix matrix =
      build_explanation_matrix(model, candidates, stats, config, kernel);
  std::vector<std::size_t> picked = submodular_pick(matrix.contributions, budget);
  if (picked.empty()) picked.push_back(0);  // all-zero matrix: degenerate case
  return aggregate_global(matrix, picked);
}

}  // namespace limeout
