#include "limeout/split.hpp"

#include <cmath>
#include <stdexcept>

#include "limeout/errors.hpp"
#include "limeout/rng.hpp"

namespace limeout {
namespace {

void shuffle(std::vector<std::size_t>& items, SeededRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[rng.below(i)]);
}

}  // namespace

SplitPair split_train_test(const Dataset& data, double fraction,
                           std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("split fraction must lie strictly in (0, 1)");
  if (data.size() < 10)
    throw DataError("dataset too small to split: " +
                    std::to_string(data.size()) + " rows (need at least 10)");
  auto counts = data.class_counts();
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] > 0 && counts[k] < 2)
      throw DataError("class '" + data.schema().class_labels[k] +
                      "' has fewer than 2 rows");

  SeededRng rng(seed);
  SplitPair out;
  out.seed = seed;

  // Per class: shuffle the class's rows, send the first
  // floor(fraction * n_c + 0.5) to train (at least one row stays on each
  // side of every represented class for fractions away from the ends).
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    std::vector<std::size_t> rows;
    rows.reserve(counts[k]);
    for (std::size_t i = 0; i < data.size(); ++i)
      if (static_cast<std::size_t>(data.label(i)) == k) rows.push_back(i);
    shuffle(rows, rng);
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(rows.size()) + 0.5));
    if (n_train == 0) n_train = 1;
    if (n_train == rows.size()) n_train = rows.size() - 1;
    for (std::size_t i = 0; i < rows.size(); ++i)
      (i < n_train ? out.train_indices : out.test_indices).push_back(rows[i]);
  }

  // Final shuffles so row order carries no class structure.
  shuffle(out.train_indices, rng);
  shuffle(out.test_indices, rng);
  out.train = data.subset(out.train_indices);
  out.test = data.subset(out.test_indices);
  return out;
}

}  // namespace limeout
