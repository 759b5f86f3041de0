#include "limeout/lime.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "limeout/errors.hpp"
#include "limeout/rng.hpp"

namespace limeout {

double default_sigma(std::size_t dimension) {
  return 0.75 * std::sqrt(static_cast<double>(dimension));
}

double kernel_weight(std::span<const double> a, std::span<const double> b,
                     double sigma) {
  if (a.size() != b.size())
    throw std::invalid_argument("kernel inputs differ in width");
  if (!(sigma > 0.0))
    throw std::invalid_argument("kernel width must be positive");
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    d2 += diff * diff;
  }
  return std::exp(-d2 / (sigma * sigma));
}

namespace {

int draw_code(const std::vector<double>& frequency, SeededRng& rng) {
  double u = rng.next_unit();
  double cumulative = 0.0;
  int last_seen = 0;
  for (std::size_t c = 0; c < frequency.size(); ++c) {
    if (frequency[c] <= 0.0) continue;
    cumulative += frequency[c];
    last_seen = static_cast<int>(c);
    if (u < cumulative) return last_seen;
  }
  return last_seen;  // guards against cumulative rounding below 1
}

// Truncated normal draw for one bin; after 100 rejected proposals the bin
// midpoint stands in (edge bins use the nearest boundary, the top bin
// reaches one standard deviation past the last boundary).
double draw_numeric(const FeatureStats::PerFeature& stats, int bin, int bins,
                    SeededRng& rng) {
  double lo = bin > 0 ? stats.boundaries[bin - 1] : 0.0;
  double hi = bin < bins - 1 ? stats.boundaries[bin] : 0.0;
  bool has_lo = bin > 0;
  bool has_hi = bin < bins - 1;
  for (int attempt = 0; attempt < 100; ++attempt) {
    double candidate = rng.normal(stats.mean, stats.stddev);
    if (has_lo && !(candidate > lo)) continue;
    if (has_hi && !(candidate <= hi)) continue;
    return candidate;
  }
  if (has_lo && has_hi) return (lo + hi) / 2.0;
  if (!has_lo) return hi;           // bottom bin: the first boundary
  return lo + stats.stddev;         // top bin: last boundary + stddev
}

}  // namespace

Neighborhood sample_neighborhood(const Classifier& model,
                                 std::span<const double> x,
                                 const FeatureStats& stats,
                                 const SurrogateConfig& config,
                                 const KernelConfig& kernel,
                                 std::optional<int> explained_class) {
  const std::size_t d = stats.features.size();
  if (x.size() != d)
    throw std::invalid_argument("instance width does not match stats");
  if (config.n_samples < static_cast<int>(d) + 2)
    throw std::invalid_argument("n_samples must be at least d + 2");
  double sigma = kernel.sigma > 0.0 ? kernel.sigma : default_sigma(d);

  std::vector<double> proba_x = model.predict_proba(x);
  int explained = 0;
  if (explained_class.has_value()) {
    explained = *explained_class;
    if (explained < 0 || static_cast<std::size_t>(explained) >= proba_x.size())
      throw std::invalid_argument("explained class index out of range");
  } else {
    for (std::size_t k = 1; k < proba_x.size(); ++k)
      if (proba_x[k] > proba_x[explained]) explained = static_cast<int>(k);
  }

  std::vector<int> x_bins = discretize(x, stats);
  const std::size_t n = static_cast<std::size_t>(config.n_samples);

  Neighborhood out;
  out.explained_class = explained;
  out.binary = Matrix(n, d);
  out.continuous = Matrix(n, d);
  out.weights.resize(n);
  out.model_outputs.resize(n);

  // Row 0 is the instance itself: all slots agree by construction.
  for (std::size_t f = 0; f < d; ++f) {
    out.binary(0, f) = 1.0;
    out.continuous(0, f) = x[f];
  }
  out.weights[0] = 1.0;
  out.model_outputs[0] = proba_x[explained];

  SeededRng rng(config.seed);
  std::vector<double> ones(d, 1.0);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t f = 0; f < d; ++f) {
      const auto& per = stats.features[f];
      if (per.kind == FeatureKind::categorical) {
        int code = draw_code(per.frequency, rng);
        out.continuous(i, f) = static_cast<double>(code);
        out.binary(i, f) = code == x_bins[f] ? 1.0 : 0.0;
      } else if (per.stddev == 0.0) {
        // Degenerate feature: every training value was the mean.
        out.continuous(i, f) = per.mean;
        out.binary(i, f) = 1.0;
      } else {
        int bin = static_cast<int>(rng.below(static_cast<std::uint64_t>(stats.bins)));
        out.continuous(i, f) = draw_numeric(per, bin, stats.bins, rng);
        out.binary(i, f) = bin == x_bins[f] ? 1.0 : 0.0;
      }
    }
    out.weights[i] = kernel_weight(ones, out.binary.row(i), sigma);
    out.model_outputs[i] = model.predict_proba(out.continuous.row(i))[explained];
  }
  return out;
}

RidgeFit solve_weighted_ridge(const Matrix& x, std::span<const double> y,
                              std::span<const double> weights, double lambda) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (y.size() != n || weights.size() != n)
    throw std::invalid_argument("ridge inputs differ in length");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  std::size_t weighted = 0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("weights must be >= 0");
    if (w > 0.0) ++weighted;
  }
  if (weighted < d + 1)
    throw std::invalid_argument("need at least d + 1 positively weighted samples");

  // Normal equations over [intercept, coefficients]; the intercept row and
  // column carry no penalty.
  const std::size_t m = d + 1;
  Matrix a(m, m);
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double w = weights[i];
    if (w == 0.0) continue;
    auto row = x.row(i);
    a(0, 0) += w;
    rhs[0] += w * y[i];
    for (std::size_t j = 0; j < d; ++j) {
      a(0, j + 1) += w * row[j];
      a(j + 1, 0) += w * row[j];
      rhs[j + 1] += w * row[j] * y[i];
      for (std::size_t k = j; k < d; ++k) a(j + 1, k + 1) += w * row[j] * row[k];
    }
  }
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t k = 1; k < j; ++k) a(j, k) = a(k, j);
    a(j, j) += lambda;
  }

  // LU with partial pivoting.
  double scale = 1.0;
  for (std::size_t j = 0; j < m; ++j)
    scale = std::max(scale, std::abs(a(j, j)));
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> solution = rhs;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) <= 1e-12 * scale) {
      if (lambda == 0.0)
        throw DegenerateNeighborhoodError(
            "weighted ridge system is singular and lambda is 0");
      throw DegenerateNeighborhoodError("weighted ridge system is singular");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < m; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(solution[col], solution[pivot]);
    }
    for (std::size_t r = col + 1; r < m; ++r) {
      double factor = a(r, col) / a(col, col);
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < m; ++c) a(r, c) -= factor * a(col, c);
      solution[r] -= factor * solution[col];
    }
  }
  for (std::size_t col = m; col-- > 0;) {
    for (std::size_t c = col + 1; c < m; ++c)
      solution[col] -= a(col, c) * solution[c];
    solution[col] /= a(col, col);
  }

  RidgeFit fit;
  fit.intercept = solution[0];
  fit.coefficients.assign(solution.begin() + 1, solution.end());

  double weight_total = 0.0, weighted_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weight_total += weights[i];
    weighted_mean += weights[i] * y[i];
  }
  weighted_mean /= weight_total;
  double sse = 0.0, tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] == 0.0) continue;
    auto row = x.row(i);
    double predicted = fit.intercept;
    for (std::size_t j = 0; j < d; ++j) predicted += fit.coefficients[j] * row[j];
    sse += weights[i] * (y[i] - predicted) * (y[i] - predicted);
    tss += weights[i] * (y[i] - weighted_mean) * (y[i] - weighted_mean);
  }
  fit.local_r2 = tss < 1e-18 ? 1.0 : 1.0 - sse / tss;
  return fit;
}

RidgeFit fit_surrogate(const Neighborhood& neighborhood, double lambda) {
  return solve_weighted_ridge(neighborhood.binary, neighborhood.model_outputs,
                              neighborhood.weights, lambda);
}

Explanation explain_instance(const Classifier& model, std::span<const double> x,
                             const FeatureStats& stats,
                             const SurrogateConfig& config,
                             const KernelConfig& kernel,
                             std::optional<int> explained_class) {
  if (config.top_k < 1)
    throw std::invalid_argument("top_k must be at least 1");
  if (model.schema().dimension() != stats.features.size())
    throw std::invalid_argument("stats width does not match model schema");
  Neighborhood neighborhood =
      sample_neighborhood(model, x, stats, config, kernel, explained_class);
  RidgeFit fit = fit_surrogate(neighborhood, config.lambda);

  const Schema& schema = model.schema();
  std::vector<std::size_t> order(fit.coefficients.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(fit.coefficients[a]) > std::abs(fit.coefficients[b]);
  });
  std::size_t keep = std::min<std::size_t>(order.size(),
                                           static_cast<std::size_t>(config.top_k));

  Explanation out;
  out.instance.assign(x.begin(), x.end());
  out.explained_class = neighborhood.explained_class;
  out.explained_label = schema.class_labels[neighborhood.explained_class];
  out.predicted_probability = neighborhood.model_outputs[0];
  for (std::size_t r = 0; r < keep; ++r)
    out.contributions.emplace_back(schema.features[order[r]].name,
                                   fit.coefficients[order[r]]);
  out.intercept = fit.intercept;
  out.local_r2 = fit.local_r2;
  out.sigma = kernel.sigma > 0.0 ? kernel.sigma : default_sigma(x.size());
  out.config = config;
  return out;
}

}  // namespace limeout
