// Local surrogate explanations: neighborhood sampling, the exponential
// kernel, the weighted ridge solver, and explain_instance composition.
#include "support.hpp"

#include <cmath>

#include "limeout/errors.hpp"
#include "limeout/lime.hpp"
#include "limeout/stats.hpp"

using namespace limeout;
using namespace limeout::testing;

namespace {

// Stats for `features` numeric features over a spread-out training sample.
FeatureStats numeric_stats(std::size_t features, std::uint64_t seed,
                           int bins = 4) {
  SeededRng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(features);
    for (auto& v : row) v = rng.normal();
    rows.push_back(row);
    labels.push_back(i % 2);
  }
  return compute_stats(numeric_dataset(features, rows, labels), bins);
}

FunctionClassifier constant_model(std::size_t features, double p1) {
  return FunctionClassifier(numeric_schema(features),
                            [p1](std::span<const double>) {
                              return std::vector<double>{1.0 - p1, p1};
                            });
}

}  // namespace

TEST_CASE("kernel weight basics") {
  std::vector<double> a = {1, 1, 0, 0};
  std::vector<double> b = {1, 0, 0, 1};
  CHECK(kernel_weight(a, a, 2.0) == 1.0);
  CHECK(kernel_weight(a, b, 2.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

  // vectors differing in exactly sigma^2 slots -> exp(-1)
  std::vector<double> c(9, 1.0), d(9, 1.0);
  for (int i = 0; i < 4; ++i) d[i] = 0.0;
  CHECK(kernel_weight(c, d, 2.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("kernel is symmetric, maximal at identity, monotone in Hamming") {
  const int d = 6;
  std::vector<double> base(d, 1.0);
  double sigma = default_sigma(d);
  CHECK(sigma == doctest::Approx(0.75 * std::sqrt(double(d))));
  double previous = 2.0;
  for (int h = 0; h <= d; ++h) {
    std::vector<double> other(d, 1.0);
    for (int i = 0; i < h; ++i) other[i] = 0.0;
    double w = kernel_weight(base, other, sigma);
    CHECK(w == kernel_weight(other, base, sigma));
    CHECK(w < previous);  // strictly decreasing with distance
    if (h == 0) CHECK(w == 1.0);
    CHECK(w > 0.0);
    previous = w;
  }
  CHECK_THROWS_AS(kernel_weight(base, std::vector<double>(d - 1, 1.0), sigma),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_weight(base, base, 0.0), std::invalid_argument);
}

TEST_CASE("neighborhood: first point is the instance with weight 1") {
  FeatureStats stats = numeric_stats(3, 5);
  auto model = constant_model(3, 0.7);
  SurrogateConfig config;
  config.n_samples = 500;
  config.seed = 9;
  std::vector<double> x = {0.1, -0.2, 0.4};
  Neighborhood n = sample_neighborhood(model, x, stats, config);
  REQUIRE(n.binary.rows() == 500);
  REQUIRE(n.continuous.rows() == 500);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(n.binary(0, j) == 1.0);
    CHECK(n.continuous(0, j) == x[j]);
  }
  CHECK(n.weights[0] == 1.0);
  for (std::size_t i = 0; i < n.binary.rows(); ++i) {
    CHECK(n.weights[i] > 0.0);
    CHECK(n.weights[i] <= 1.0);
    CHECK(n.model_outputs[i] == 0.7);
    for (std::size_t j = 0; j < 3; ++j) {
      bool binary = n.binary(i, j) == 0.0 || n.binary(i, j) == 1.0;
      CHECK(binary);
    }
  }
}

TEST_CASE("neighborhood: single-code categorical always matches") {
  Schema schema;
  schema.features = {{"g", FeatureKind::categorical}};
  schema.target = "y";
  schema.class_labels = {"0", "1"};
  Dataset data(schema, {{"only"}});
  for (int i = 0; i < 10; ++i) data.add_row(std::vector<double>{0.0}, i % 2);
  FeatureStats stats = compute_stats(data, 4);
  REQUIRE(stats.features[0].frequency == std::vector<double>{1.0});

  FunctionClassifier model(schema, [](std::span<const double>) {
    return std::vector<double>{0.4, 0.6};
  });
  SurrogateConfig config;
  config.n_samples = 200;
  config.seed = 3;
  std::vector<double> x = {0.0};
  Neighborhood n = sample_neighborhood(model, x, stats, config);
  for (std::size_t i = 0; i < n.binary.rows(); ++i) {
    CHECK(n.binary(i, 0) == 1.0);
    CHECK(n.continuous(i, 0) == 0.0);
  }
}

TEST_CASE("neighborhood: bin-match rate approximates 1/p") {
  FeatureStats stats = numeric_stats(1, 17);
  auto model = constant_model(1, 0.5);
  SurrogateConfig config;
  config.n_samples = 5000;
  config.seed = 23;
  std::vector<double> x = {0.3};
  Neighborhood n = sample_neighborhood(model, x, stats, config);
  double matches = 0.0;
  for (std::size_t i = 1; i < n.binary.rows(); ++i) matches += n.binary(i, 0);
  double rate = matches / double(n.binary.rows() - 1);
  CHECK(rate == doctest::Approx(0.25).epsilon(0.08));  // 0.25 +- 0.02
}

TEST_CASE("neighborhood: degenerate numeric feature pins slot and value") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    rows.push_back({5.0, double(i)});
    labels.push_back(i % 2);
  }
  Dataset data = numeric_dataset(2, rows, labels);
  FeatureStats stats = compute_stats(data, 4);
  auto model = constant_model(2, 0.5);
  SurrogateConfig config;
  config.n_samples = 300;
  config.seed = 4;
  std::vector<double> x = {5.0, 3.0};
  Neighborhood n = sample_neighborhood(model, x, stats, config);
  for (std::size_t i = 0; i < n.binary.rows(); ++i) {
    CHECK(n.binary(i, 0) == 1.0);
    CHECK(n.continuous(i, 0) == 5.0);
  }
}

TEST_CASE("neighborhood: continuous samples respect bin boundaries") {
  FeatureStats stats = numeric_stats(1, 29);
  const auto& f = stats.features[0];
  auto model = constant_model(1, 0.5);
  SurrogateConfig config;
  config.n_samples = 2000;
  config.seed = 31;
  std::vector<double> x = {0.0};
  Neighborhood n = sample_neighborhood(model, x, stats, config);
  for (std::size_t i = 1; i < n.continuous.rows(); ++i) {
    double v = n.continuous(i, 0);
    int bin = discretize_value(v, f.boundaries);
    // the binary slot matches iff the value's bin equals the instance's
    int instance_bin = discretize_value(0.0, f.boundaries);
    CHECK(n.binary(i, 0) == (bin == instance_bin ? 1.0 : 0.0));
  }
}

TEST_CASE("sample_neighborhood validates inputs") {
  FeatureStats stats = numeric_stats(3, 37);
  auto model = constant_model(3, 0.5);
  SurrogateConfig config;
  config.n_samples = 4;  // < d + 2
  std::vector<double> x = {0, 0, 0};
  CHECK_THROWS_AS(sample_neighborhood(model, x, stats, config),
                  std::invalid_argument);
  config.n_samples = 100;
  std::vector<double> wrong_width = {0, 0};
  CHECK_THROWS_AS(sample_neighborhood(model, wrong_width, stats, config),
                  std::invalid_argument);
}

TEST_CASE("ridge solver: affine data is interpolated exactly") {
  SeededRng rng(43);
  Matrix x(12, 3);
  std::vector<double> y(12), w(12);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.below(2);
    y[i] = 2.0 * x(i, 0) - 1.5 * x(i, 1) + 0.25 * x(i, 2) + 0.75;
    w[i] = 0.2 + rng.next_unit();
  }
  RidgeFit fit = solve_weighted_ridge(x, y, w, 0.0);
  CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fit.coefficients[1] == doctest::Approx(-1.5).epsilon(1e-8));
  CHECK(fit.coefficients[2] == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(fit.intercept == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(fit.local_r2 == doctest::Approx(1.0).epsilon(1e-9));

  double sse = 0.0;
  for (std::size_t i = 0; i < 12; ++i) {
    double g = fit.intercept;
    for (std::size_t j = 0; j < 3; ++j) g += fit.coefficients[j] * x(i, j);
    sse += w[i] * (y[i] - g) * (y[i] - g);
  }
  CHECK(sse <= 1e-10);
}

TEST_CASE("ridge solver: huge lambda shrinks coefficients to zero") {
  SeededRng rng(47);
  Matrix x(10, 2);
  std::vector<double> y(10), w(10);
  double weighted_sum = 0.0, weight_total = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    x(i, 0) = rng.below(2);
    x(i, 1) = rng.below(2);
    y[i] = rng.next_unit() * 4.0 - 2.0;
    w[i] = 0.5 + rng.next_unit();
    weighted_sum += w[i] * y[i];
    weight_total += w[i];
  }
  RidgeFit fit = solve_weighted_ridge(x, y, w, 1e9);
  CHECK(std::abs(fit.coefficients[0]) < 1e-6);
  CHECK(std::abs(fit.coefficients[1]) < 1e-6);
  CHECK(fit.intercept ==
        doctest::Approx(weighted_sum / weight_total).epsilon(1e-6));
}

TEST_CASE("ridge solver agrees with the Gauss-Jordan oracle") {
  SeededRng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 5 + rng.below(6);   // 5..10
    std::size_t d = 1 + rng.below(4);   // 1..4
    if (n < d + 1) n = d + 1;
    double lambda = std::vector<double>{0.0, 0.1, 1.0}[rng.below(3)];
    Matrix x(n, d);
    std::vector<double> y(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.normal();
      y[i] = rng.normal();
      w[i] = 0.1 + rng.next_unit();
    }
    RidgeFit fit = solve_weighted_ridge(x, y, w, lambda);
    auto oracle = ridge_oracle(x, y, w, lambda);
    for (std::size_t j = 0; j < d; ++j)
      CHECK(fit.coefficients[j] == doctest::Approx(oracle[j]).epsilon(1e-8));
    CHECK(fit.intercept == doctest::Approx(oracle[d]).epsilon(1e-8));
  }
}

TEST_CASE("ridge solver: singular system with lambda 0 is degenerate") {
  Matrix x(6, 2);
  std::vector<double> y(6), w(6, 1.0);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = double(i % 2);
    x(i, 1) = x(i, 0);  // perfectly collinear
    y[i] = double(i);
  }
  CHECK_THROWS_AS(solve_weighted_ridge(x, y, w, 0.0),
                  DegenerateNeighborhoodError);
  CHECK_NOTHROW(solve_weighted_ridge(x, y, w, 1e-3));  // ridge regularizes

  std::vector<double> few(6, 0.0);
  few[0] = 1.0;  // only one positive weight < d+1
  CHECK_THROWS_AS(solve_weighted_ridge(x, y, few, 0.1),
                  std::invalid_argument);
}

TEST_CASE("ridge solver: weight scaling leaves lambda=0 fit unchanged") {
  SeededRng rng(59);
  Matrix x(9, 3);
  std::vector<double> y(9), w(9), scaled(9);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y[i] = rng.normal();
    w[i] = 0.2 + rng.next_unit();
    scaled[i] = w[i] * 37.5;
  }
  RidgeFit a = solve_weighted_ridge(x, y, w, 0.0);
  RidgeFit b = solve_weighted_ridge(x, y, scaled, 0.0);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(a.coefficients[j] == doctest::Approx(b.coefficients[j]).epsilon(1e-9));
  CHECK(a.intercept == doctest::Approx(b.intercept).epsilon(1e-9));
}

TEST_CASE("explain_instance: constant model has near-zero contributions") {
  FeatureStats stats = numeric_stats(3, 61);
  auto model = constant_model(3, 0.42);
  SurrogateConfig config;
  config.n_samples = 3000;
  config.top_k = 3;
  config.seed = 67;
  std::vector<double> x = {0.2, -0.1, 0.5};
  Explanation e = explain_instance(model, x, stats, config);
  // Default explained class is the argmax of (0.58, 0.42): class 0 at 0.58.
  CHECK(e.intercept == doctest::Approx(0.58).epsilon(1e-6));
  for (const auto& [name, value] : e.contributions)
    CHECK(std::abs(value) < 1e-6);
  CHECK(e.predicted_probability == 1.0 - 0.42);
  CHECK(e.explained_class == 0);
  CHECK(e.explained_label == "0");
}

TEST_CASE("explain_instance: bin-indicator model is attributed to its feature") {
  FeatureStats stats = numeric_stats(3, 71);
  const auto& f1 = stats.features[1];
  std::vector<double> x = {0.3, -0.8, 0.9};
  int x_bin = discretize_value(x[1], f1.boundaries);
  FunctionClassifier model(
      numeric_schema(3), [&, x_bin](std::span<const double> row) {
        double hit = discretize_value(row[1], f1.boundaries) == x_bin;
        return std::vector<double>{1.0 - hit, hit};
      });
  SurrogateConfig config;
  config.n_samples = 4000;
  config.top_k = 3;
  config.seed = 73;
  Explanation e = explain_instance(model, x, stats, config, {}, 1);
  REQUIRE(!e.contributions.empty());
  CHECK(e.contributions[0].first == "x1");
  CHECK(e.contributions[0].second > 0.0);
  CHECK(std::abs(e.contributions[0].second) >
        3.0 * std::abs(e.contributions[1].second));
  CHECK(e.local_r2 > 0.9);
}

TEST_CASE("explain_instance is deterministic and truncates to top_k") {
  FeatureStats stats = numeric_stats(4, 79);
  FunctionClassifier model(numeric_schema(4), [](std::span<const double> row) {
    double s = 1.0 / (1.0 + std::exp(-(row[0] - row[2])));
    return std::vector<double>{1.0 - s, s};
  });
  SurrogateConfig config;
  config.n_samples = 800;
  config.top_k = 2;
  config.seed = 83;
  std::vector<double> x = {1.0, 0.0, -1.0, 0.5};
  Explanation a = explain_instance(model, x, stats, config);
  Explanation b = explain_instance(model, x, stats, config);
  REQUIRE(a.contributions.size() == 2);
  CHECK(a.contributions == b.contributions);
  CHECK(a.intercept == b.intercept);
  CHECK(a.local_r2 == b.local_r2);
  CHECK(std::abs(a.contributions[0].second) >=
        std::abs(a.contributions[1].second));

  SurrogateConfig other = config;
  other.seed = 84;
  Explanation c = explain_instance(model, x, stats, other);
  CHECK(a.contributions != c.contributions);

  config.top_k = 0;
  CHECK_THROWS_AS(explain_instance(model, x, stats, config),
                  std::invalid_argument);
}
