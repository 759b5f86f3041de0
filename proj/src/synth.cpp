#include "limeout/synth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "limeout/rng.hpp"

namespace limeout {

Dataset generate_planted_bias(const PlantedBiasOptions& options) {
  if (options.rows < 100)
    throw std::invalid_argument("planted-bias generator needs at least 100 rows");
  if (options.bias_strengths.empty())
    throw std::invalid_argument("at least one bias strength is required");
  for (double s : options.bias_strengths)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("bias strengths must be finite and >= 0");
  if (!(options.redundancy >= 0.0 && options.redundancy <= 1.0))
    throw std::invalid_argument("redundancy must lie in [0, 1]");
  if (options.noise_features < 0)
    throw std::invalid_argument("noise feature count must be >= 0");

  const std::size_t m = options.bias_strengths.size();
  Schema schema;
  if (m == 1) {
    schema.features.push_back({"s", FeatureKind::categorical});
  } else {
    for (std::size_t j = 0; j < m; ++j)
      schema.features.push_back({"s_" + std::to_string(j),
                                 FeatureKind::categorical});
  }
  schema.features.push_back({"u", FeatureKind::numeric});
  for (int i = 0; i < options.noise_features; ++i)
    schema.features.push_back({"noise_" + std::to_string(i),
                               FeatureKind::numeric});
  schema.target = "label";
  schema.class_labels = {"0", "1"};

  std::vector<std::vector<std::string>> code_tables(schema.dimension());
  for (std::size_t j = 0; j < m; ++j) code_tables[j] = {"0", "1"};

  Dataset data(schema, code_tables);
  SeededRng rng(options.seed);
  const double mix = options.redundancy;
  const double residual = std::sqrt(1.0 - mix * mix);

  std::vector<double> row(schema.dimension());
  for (std::size_t i = 0; i < options.rows; ++i) {
    double zbar = 0.0;
    double lean = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double s = static_cast<double>(rng.below(2));
      row[j] = s;
      zbar += (2.0 * s - 1.0) / std::sqrt(static_cast<double>(m));
      lean += options.bias_strengths[j] * s;
    }
    double eps = rng.normal();
    double u = mix * zbar + residual * eps;
    row[m] = u;
    for (int f = 0; f < options.noise_features; ++f)
      row[m + 1 + f] = rng.normal();
    double logit = lean + 2.0 * u;
    double p = 1.0 / (1.0 + std::exp(-logit));
    int label = rng.next_unit() < p ? 1 : 0;
    data.add_row(row, label);
  }
  return data;
}

Dataset generate_planted_bias(std::size_t rows, int noise_features,
                              double bias_strength, double redundancy,
                              std::uint64_t seed) {
  PlantedBiasOptions options;
  options.rows = rows;
  options.noise_features = noise_features;
  options.bias_strengths = {bias_strength};
  options.redundancy = redundancy;
  options.seed = seed;
  return generate_planted_bias(options);
}

}  // namespace limeout
