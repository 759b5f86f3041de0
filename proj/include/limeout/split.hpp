#pragma once

#include <cstdint>
#include <vector>

#include "limeout/dataset.hpp"

namespace limeout {

struct SplitPair {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Stratified shuffle split.  Within each class (in class-index order) the
// row indices are shuffled and the first round(fraction * n_c) go to train,
// where round(x) = floor(x + 0.5).  Both halves are then shuffled once more
// so row order carries no class structure.  Deterministic in (data, seed).
// Throws DataError when the dataset has fewer than 10 rows or any class has
// fewer than 2 rows.
SplitPair split_train_test(const Dataset& data, double fraction = 0.7,
                           std::uint64_t seed = 0);

}  // namespace limeout
