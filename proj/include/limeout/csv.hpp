#pragma once

#include <map>
#include <string>

#include "limeout/dataset.hpp"

namespace limeout {

// Loads a headered CSV.  Column kinds are inferred (numeric when every cell
// parses as a finite real, categorical otherwise) unless overridden by name.
// Categorical codes and class labels are assigned in first-appearance order.
// Throws DataError for a missing file, a missing target column, an
// unparseable or ragged row (reported with its 1-based line number), or a
// target with fewer than two distinct values.
Dataset load_csv(const std::string& path, const std::string& target,
                 const std::map<std::string, FeatureKind>& kind_overrides = {});

// Writes the dataset back out as CSV (header + rows).  Quotes fields that
// need it.  Throws DataError when the file cannot be written.
void write_csv(const Dataset& data, const std::string& path);

}  // namespace limeout
