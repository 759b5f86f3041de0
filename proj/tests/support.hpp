// Shared helpers for the unit test binaries.
#pragma once

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "doctest.h"
#include "limeout/classifier.hpp"
#include "limeout/dataset.hpp"
#include "limeout/matrix.hpp"
#include "limeout/rng.hpp"

namespace limeout::testing {

// Wraps an arbitrary probability function as a classifier, for driving the
// explanation pipeline with known black boxes.
class FunctionClassifier final : public Classifier {
 public:
  FunctionClassifier(Schema schema,
                     std::function<std::vector<double>(std::span<const double>)> fn)
      : schema_(std::move(schema)), fn_(std::move(fn)) {}

  const Schema& schema() const override { return schema_; }
  std::vector<double> predict_proba(std::span<const double> row) const override {
    return fn_(row);
  }

 private:
  Schema schema_;
  std::function<std::vector<double>(std::span<const double>)> fn_;
};

inline Schema numeric_schema(std::size_t features,
                             std::vector<std::string> labels = {"0", "1"}) {
  Schema schema;
  for (std::size_t i = 0; i < features; ++i)
    schema.features.push_back({"x" + std::to_string(i), FeatureKind::numeric});
  schema.target = "y";
  schema.class_labels = std::move(labels);
  return schema;
}

inline Dataset numeric_dataset(std::size_t features,
                               const std::vector<std::vector<double>>& rows,
                               const std::vector<int>& labels) {
  Dataset data(numeric_schema(features),
               std::vector<std::vector<std::string>>(features));
  for (std::size_t i = 0; i < rows.size(); ++i) data.add_row(rows[i], labels[i]);
  return data;
}

// Independent weighted-ridge oracle: builds the (d+1)-square normal
// equations over [x, 1] and solves them by Gauss-Jordan elimination with
// full pivoting.  The intercept (last column) is unpenalized.
inline std::vector<double> ridge_oracle(const Matrix& x,
                                        std::span<const double> y,
                                        std::span<const double> w,
                                        double lambda) {
  std::size_t d = x.cols(), n = x.rows(), m = d + 1;
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  auto cell = [&](std::size_t i, std::size_t j) -> double {
    return j < d ? x(i, j) : 1.0;
  };
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t i = 0; i < n; ++i)
        a[r][c] += w[i] * cell(i, r) * cell(i, c);
    if (r < d) a[r][r] += lambda;
    for (std::size_t i = 0; i < n; ++i) a[r][m] += w[i] * cell(i, r) * y[i];
  }
  std::vector<std::size_t> row_of(m), col_of(m);
  std::vector<bool> used_row(m, false), used_col(m, false);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t pr = m, pc = m;
    double best = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (used_row[r]) continue;
      for (std::size_t c = 0; c < m; ++c) {
        if (used_col[c]) continue;
        if (std::abs(a[r][c]) > best) best = std::abs(a[r][c]), pr = r, pc = c;
      }
    }
    REQUIRE(pr != m);
    used_row[pr] = used_col[pc] = true;
    row_of[step] = pr, col_of[step] = pc;
    double pivot = a[pr][pc];
    for (std::size_t c = 0; c <= m; ++c) a[pr][c] /= pivot;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == pr) continue;
      double factor = a[r][pc];
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c <= m; ++c) a[r][c] -= factor * a[pr][c];
    }
  }
  std::vector<double> solution(m, 0.0);
  for (std::size_t step = 0; step < m; ++step)
    solution[col_of[step]] = a[row_of[step]][m];
  return solution;  // coefficients..., intercept last
}

}  // namespace limeout::testing
