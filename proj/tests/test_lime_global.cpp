// Global explanations: the stacked explanation matrix, greedy submodular
// pick, and aggregation into a ranked feature table.
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "limeout/global_explanation.hpp"
#include "limeout/lime.hpp"
#include "limeout/stats.hpp"

using namespace limeout;
using namespace limeout::testing;

namespace {

Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Independent restatement of the coverage objective the pick maximizes.
std::vector<double> column_importance(const Matrix& w) {
  std::vector<double> imp(w.cols(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) imp[j] += std::abs(w(i, j));
  for (double& v : imp) v = std::sqrt(v);
  return imp;
}

double coverage(const Matrix& w, const std::vector<std::size_t>& rows) {
  std::vector<double> imp = column_importance(w);
  double total = 0.0;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    bool used = false;
    for (std::size_t i : rows)
      if (w(i, j) != 0.0) {
        used = true;
        break;
      }
    if (used) total += imp[j];
  }
  return total;
}

Matrix random_sparse(SeededRng& rng, std::size_t m, std::size_t d,
                     double density) {
  Matrix w(m, d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (rng.next_unit() < density) w(i, j) = rng.uniform_real(-1.0, 1.0);
  return w;
}

ExplanationMatrix make_explanations(std::vector<std::string> names,
                                    std::initializer_list<std::initializer_list<double>> rows) {
  ExplanationMatrix em;
  em.contributions = make_matrix(rows);
  em.feature_names = std::move(names);
  for (std::size_t i = 0; i < em.contributions.rows(); ++i) {
    em.candidate_rows.push_back(i);
    em.local_r2.push_back(1.0);
  }
  return em;
}

FeatureStats numeric_stats(std::size_t features, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(features);
    for (auto& v : row) v = rng.normal();
    rows.push_back(row);
    labels.push_back(i % 2);
  }
  return compute_stats(numeric_dataset(features, rows, labels), 4);
}

Dataset random_rows(std::size_t features, std::size_t count,
                    std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> row(features);
    for (auto& v : row) v = rng.normal();
    rows.push_back(row);
    labels.push_back(static_cast<int>(i % 2));
  }
  return numeric_dataset(features, rows, labels);
}

}  // namespace

TEST_CASE("submodular_pick: disjoint coverage picks both instances") {
  Matrix w = make_matrix({{1, 0}, {0, 1}});
  auto picked = submodular_pick(w, 2);
  CHECK(picked == std::vector<std::size_t>{0, 1});
}

TEST_CASE("submodular_pick: the singleton covering both columns wins") {
  Matrix w = make_matrix({{1, 1}, {1, 0}});
  auto picked = submodular_pick(w, 1);
  REQUIRE(picked.size() == 1);
  CHECK(picked[0] == 0);
  CHECK(coverage(w, {0}) > coverage(w, {1}));
}

TEST_CASE("submodular_pick stops early when marginal gain hits zero") {
  // Row 1 duplicates row 0's support, so it can never add coverage.
  Matrix w = make_matrix({{1, 0}, {1, 0}});
  CHECK(submodular_pick(w, 5) == std::vector<std::size_t>{0});

  Matrix same = make_matrix({{2, 3}, {2, 3}, {2, 3}});
  CHECK(submodular_pick(same, 3) == std::vector<std::size_t>{0});

  Matrix zero(3, 2);
  CHECK(submodular_pick(zero, 3).empty());
}

TEST_CASE("submodular_pick: ties break toward the lower instance index") {
  Matrix w = make_matrix({{0, 1}, {1, 0}});  // symmetric gains
  auto picked = submodular_pick(w, 2);
  CHECK(picked == std::vector<std::size_t>{0, 1});
}

TEST_CASE("submodular_pick rejects a non-positive budget and an empty matrix") {
  Matrix w = make_matrix({{1, 0}});
  CHECK_THROWS_AS(submodular_pick(w, 0), std::invalid_argument);
  CHECK_THROWS_AS(submodular_pick(Matrix(0, 3), 1), std::invalid_argument);
}

TEST_CASE("submodular_pick with budget 1 matches the exhaustive singleton") {
  SeededRng rng(901);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t m = 2 + rng.below(11);  // up to 12 rows
    std::size_t d = 1 + rng.below(6);
    Matrix w = random_sparse(rng, m, d, 0.5);

    std::size_t best = m;
    double best_cov = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double c = coverage(w, {i});
      if (c > best_cov) {
        best_cov = c;
        best = i;
      }
    }
    auto picked = submodular_pick(w, 1);
    if (best == m) {
      CHECK(picked.empty());  // all-zero matrix covers nothing
    } else {
      REQUIRE(picked.size() == 1);
      CHECK(picked[0] == best);
    }
  }
}

TEST_CASE("greedy coverage grows with diminishing positive gains") {
  SeededRng rng(907);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t m = 3 + rng.below(10);
    std::size_t d = 2 + rng.below(5);
    Matrix w = random_sparse(rng, m, d, 0.6);
    auto picked = submodular_pick(w, static_cast<int>(m));

    std::vector<std::size_t> taken;
    double previous_gain = std::numeric_limits<double>::infinity();
    for (std::size_t p : picked) {
      double before = taken.empty() ? 0.0 : coverage(w, taken);
      // The implementation must have chosen the best available row.
      std::size_t expect = m;
      double expect_gain = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (std::find(taken.begin(), taken.end(), i) != taken.end()) continue;
        auto with = taken;
        with.push_back(i);
        double gain = coverage(w, with) - before;
        if (expect == m || gain > expect_gain) {
          expect_gain = gain;
          expect = i;
        }
      }
      CHECK(p == expect);
      taken.push_back(p);
      double gain = coverage(w, taken) - before;
      CHECK(gain > 0.0);
      CHECK(gain <= previous_gain + 1e-12);
      previous_gain = gain;
    }
    // Unlimited budget exhausts every positive gain: full-matrix coverage.
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    CHECK(coverage(w, picked) ==
          doctest::Approx(coverage(w, all)).epsilon(1e-12));
  }
}

TEST_CASE("aggregate_global: a single picked row ranks by absolute value") {
  auto em = make_explanations({"x0", "x1", "x2"}, {{0.5, -2.0, 1.0}});
  GlobalExplanation g = aggregate_global(em, {0});
  REQUIRE(g.ranked.size() == 3);
  CHECK(g.budget == 1);
  CHECK(g.ranked[0].feature == "x1");
  CHECK(g.ranked[0].mean_signed == -2.0);
  CHECK(g.ranked[0].mean_abs == 2.0);
  CHECK(g.ranked[0].stderr_signed == 0.0);  // one sample: no spread estimate
  CHECK(g.ranked[1].feature == "x2");
  CHECK(g.ranked[2].feature == "x0");
}

TEST_CASE("aggregate_global: opposite signs cancel the mean but not the magnitude") {
  auto em = make_explanations({"a", "b"}, {{0.4, 0.1}, {-0.4, 0.1}});
  GlobalExplanation g = aggregate_global(em, {0, 1});
  const GlobalFeature& a = g.ranked[0];
  REQUIRE(a.feature == "a");  // 0.4 magnitude beats 0.1
  CHECK(a.mean_signed == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(a.mean_abs == doctest::Approx(0.4).epsilon(1e-15));
  // sd of {0.4, -0.4} is 0.4*sqrt(2); SE divides by sqrt(2) again.
  CHECK(a.stderr_signed == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("aggregate_global: hand-computed mean and standard error") {
  auto em =
      make_explanations({"f"}, {{1.0}, {2.0}, {6.0}});
  GlobalExplanation g = aggregate_global(em, {0, 1, 2});
  const GlobalFeature& f = g.ranked[0];
  CHECK(f.mean_signed == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(f.mean_abs == doctest::Approx(3.0).epsilon(1e-15));
  // sample sd = sqrt(((-2)^2 + (-1)^2 + 3^2)/2) = sqrt(7); SE = sqrt(7/3).
  CHECK(f.stderr_signed ==
        doctest::Approx(std::sqrt(7.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("aggregate_global keeps schema order on tied magnitudes") {
  auto em = make_explanations({"x0", "x1", "x2"},
                              {{0.3, -0.3, 0.3}, {0.3, -0.3, 0.3}});
  GlobalExplanation g = aggregate_global(em, {0, 1});
  REQUIRE(g.ranked.size() == 3);
  CHECK(g.ranked[0].feature == "x0");
  CHECK(g.ranked[1].feature == "x1");
  CHECK(g.ranked[2].feature == "x2");
}

TEST_CASE("aggregate_global is permutation-invariant in the picked list") {
  SeededRng rng(911);
  Matrix w = random_sparse(rng, 6, 5, 0.8);
  ExplanationMatrix em;
  em.contributions = w;
  for (int j = 0; j < 5; ++j) em.feature_names.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < 6; ++i) {
    em.candidate_rows.push_back(i);
    em.local_r2.push_back(1.0);
  }
  GlobalExplanation a = aggregate_global(em, {4, 1, 3});
  GlobalExplanation b = aggregate_global(em, {1, 3, 4});
  GlobalExplanation c = aggregate_global(em, {3, 4, 1});
  REQUIRE(a.ranked.size() == b.ranked.size());
  REQUIRE(a.ranked.size() == c.ranked.size());
  for (std::size_t j = 0; j < a.ranked.size(); ++j) {
    for (const GlobalExplanation* other : {&b, &c}) {
      CHECK(a.ranked[j].feature == other->ranked[j].feature);
      CHECK(a.ranked[j].mean_signed ==
            doctest::Approx(other->ranked[j].mean_signed).epsilon(1e-12));
      CHECK(a.ranked[j].mean_abs ==
            doctest::Approx(other->ranked[j].mean_abs).epsilon(1e-12));
      CHECK(a.ranked[j].stderr_signed ==
            doctest::Approx(other->ranked[j].stderr_signed).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(aggregate_global(em, {}), std::invalid_argument);
}

TEST_CASE("build_explanation_matrix: constant model yields near-zero rows") {
  FeatureStats stats = numeric_stats(3, 101);
  FunctionClassifier model(numeric_schema(3), [](std::span<const double>) {
    return std::vector<double>{0.58, 0.42};
  });
  Dataset candidates = random_rows(3, 1, 103);
  SurrogateConfig config;
  config.n_samples = 1000;
  config.top_k = 3;
  config.seed = 107;
  ExplanationMatrix em =
      build_explanation_matrix(model, candidates, stats, config);
  REQUIRE(em.contributions.rows() == 1);
  REQUIRE(em.contributions.cols() == 3);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(std::abs(em.contributions(0, j)) < 1e-6);
  CHECK(em.local_r2[0] == 1.0);  // zero variance to explain
  CHECK(em.feature_names == std::vector<std::string>{"x0", "x1", "x2"});
  CHECK(em.candidate_rows == std::vector<std::size_t>{0});

  CHECK_THROWS_AS(
      build_explanation_matrix(model, random_rows(3, 0, 1), stats, config),
      std::invalid_argument);
}

TEST_CASE("build_explanation_matrix: deterministic, per-row seeds, top-k sparsity") {
  const std::size_t d = 5;
  FeatureStats stats = numeric_stats(d, 109);
  FunctionClassifier model(numeric_schema(d), [](std::span<const double> row) {
    double s = 1.0 / (1.0 + std::exp(-(2.0 * row[0] - row[3])));
    return std::vector<double>{1.0 - s, s};
  });
  Dataset candidates = random_rows(d, 4, 113);
  SurrogateConfig config;
  config.n_samples = 1200;
  config.top_k = 2;
  config.seed = 127;

  ExplanationMatrix em =
      build_explanation_matrix(model, candidates, stats, config);
  ExplanationMatrix again =
      build_explanation_matrix(model, candidates, stats, config);
  CHECK(em.contributions.data() == again.contributions.data());
  CHECK(em.local_r2 == again.local_r2);

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    // Each row is the single-instance explanation under its derived seed.
    SurrogateConfig per_row = config;
    per_row.seed = derive_seed(config.seed, seed_stream::kInstance, i);
    Explanation e = explain_instance(model, candidates.row(i), stats, per_row);
    std::vector<double> expect(d, 0.0);
    for (const auto& [name, value] : e.contributions)
      expect[static_cast<std::size_t>(model.schema().feature_index(name))] =
          value;
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < d; ++j) {
      CHECK(em.contributions(i, j) == expect[j]);
      if (em.contributions(i, j) != 0.0) ++nonzero;
    }
    CHECK(nonzero <= 2);  // top-k truncation zeroes the rest
    CHECK(nonzero >= 1);
    CHECK(em.local_r2[i] == e.local_r2);
  }
}

TEST_CASE("bin-indicator model concentrates every row's mass on its column") {
  FeatureStats stats = numeric_stats(3, 131);
  const auto& f1 = stats.features[1];
  // Fires when feature 1 falls in a fixed bin, ignoring everything else.
  FunctionClassifier model(
      numeric_schema(3), [&](std::span<const double> row) {
        double hit = discretize_value(row[1], f1.boundaries) == 2 ? 1.0 : 0.0;
        return std::vector<double>{1.0 - hit, hit};
      });
  Dataset candidates = random_rows(3, 6, 137);
  SurrogateConfig config;
  config.n_samples = 3000;
  config.top_k = 3;
  config.seed = 139;
  ExplanationMatrix em =
      build_explanation_matrix(model, candidates, stats, config, {});
  for (std::size_t i = 0; i < em.contributions.rows(); ++i) {
    double own = std::abs(em.contributions(i, 1));
    double total = 0.0;
    for (std::size_t j = 0; j < 3; ++j) total += std::abs(em.contributions(i, j));
    CHECK(own > std::abs(em.contributions(i, 0)));
    CHECK(own > std::abs(em.contributions(i, 2)));
    CHECK(own > 0.5 * total);
  }
  auto picked = submodular_pick(em.contributions, 15);
  GlobalExplanation g = aggregate_global(em, picked);
  CHECK(g.ranked[0].feature == "x1");
}

TEST_CASE("features the model ignores stay under the noise floor") {
  // Truncated regime: top_k < d, so explanations cover different feature
  // subsets and the pick keeps several instances.  Features the model never
  // reads must aggregate below 3x their own standard error, while the two
  // real inputs must clear it.
  const std::size_t d = 17;
  FeatureStats stats = numeric_stats(d, 149);
  FunctionClassifier model(numeric_schema(d), [](std::span<const double> row) {
    double s = 1.0 / (1.0 + std::exp(-(2.0 * row[0] - 1.5 * row[1])));
    return std::vector<double>{1.0 - s, s};
  });
  Dataset candidates = random_rows(d, 40, 151);
  SurrogateConfig config;
  config.n_samples = 2000;
  config.top_k = 5;
  config.seed = 157;
  GlobalExplanation g = global_explanation(model, candidates, stats, config);
  REQUIRE(g.picked.size() > 1);

  auto find = [&](const std::string& name) -> const GlobalFeature& {
    for (const auto& f : g.ranked)
      if (f.feature == name) return f;
    REQUIRE(false);
    return g.ranked.front();
  };
  CHECK(g.ranked[0].feature == "x0");
  CHECK(g.ranked[1].feature == "x1");
  double loudest_noise = 0.0;
  for (std::size_t j = 2; j < d; ++j) {
    const GlobalFeature& f = find("x" + std::to_string(j));
    CHECK(f.mean_abs <= 3.0 * f.stderr_signed);
    loudest_noise = std::max(loudest_noise, f.mean_abs);
  }
  // The real inputs sit an order of magnitude above every ignored feature.
  CHECK(find("x0").mean_abs > 10.0 * loudest_noise);
  CHECK(find("x1").mean_abs > 10.0 * loudest_noise);
}
