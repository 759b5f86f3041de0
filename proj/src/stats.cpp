#include "limeout/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace limeout {

FeatureStats compute_stats(const Dataset& data, int bins) {
  if (bins < 2) throw std::invalid_argument("bins must be at least 2");
  if (data.size() == 0) throw std::invalid_argument("empty dataset");

  FeatureStats stats;
  stats.bins = bins;
  stats.features.resize(data.dimension());
  const std::size_t n = data.size();

  for (std::size_t f = 0; f < data.dimension(); ++f) {
    auto& per = stats.features[f];
    per.kind = data.schema().features[f].kind;
    if (per.kind == FeatureKind::categorical) {
      per.frequency.assign(data.code_table(f).size(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
        per.frequency[static_cast<std::size_t>(data.value(i, f))] += 1.0;
      for (double& p : per.frequency) p /= static_cast<double>(n);
      continue;
    }
    double sum = 0.0;
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) {
      sorted[i] = data.value(i, f);
      sum += sorted[i];
    }
    std::sort(sorted.begin(), sorted.end());
    per.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : sorted) ss += (v - per.mean) * (v - per.mean);
    per.stddev = std::sqrt(ss / static_cast<double>(n));

    // Quantile boundaries at q = j/bins, linearly interpolated at
    // fractional rank q * (n - 1).
    per.boundaries.resize(bins - 1);
    for (int j = 1; j < bins; ++j) {
      double rank = (static_cast<double>(j) / bins) * static_cast<double>(n - 1);
      std::size_t lo = static_cast<std::size_t>(std::floor(rank));
      double frac = rank - static_cast<double>(lo);
      double value = sorted[lo];
      if (frac > 0.0 && lo + 1 < n)
        value += frac * (sorted[lo + 1] - sorted[lo]);
      per.boundaries[j - 1] = value;
    }
  }
  return stats;
}

int discretize_value(double v, std::span<const double> boundaries) {
  for (std::size_t j = 0; j < boundaries.size(); ++j)
    if (v <= boundaries[j]) return static_cast<int>(j);
  return static_cast<int>(boundaries.size());
}

std::vector<int> discretize(std::span<const double> row,
                            const FeatureStats& stats) {
  if (row.size() != stats.features.size())
    throw std::invalid_argument("row width does not match stats");
  std::vector<int> out(row.size());
  for (std::size_t f = 0; f < row.size(); ++f) {
    const auto& per = stats.features[f];
    if (per.kind == FeatureKind::categorical)
      out[f] = static_cast<int>(row[f]);
    else
      out[f] = discretize_value(row[f], per.boundaries);
  }
  return out;
}

}  // namespace limeout
