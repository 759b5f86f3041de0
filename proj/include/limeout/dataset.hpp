#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "limeout/schema.hpp"

namespace limeout {

// In-memory table.  Numeric cells hold finite doubles; categorical cells
// hold small non-negative integer codes stored as doubles, with one text
// table per categorical feature mapping code -> original string.  Labels
// are class indices into schema().class_labels.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Schema schema, std::vector<std::vector<std::string>> code_tables);

  const Schema& schema() const { return schema_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t dimension() const { return schema_.dimension(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * schema_.dimension(), schema_.dimension()};
  }
  double value(std::size_t i, std::size_t f) const {
    return values_[i * schema_.dimension() + f];
  }
  int label(std::size_t i) const { return labels_[i]; }

  const std::vector<std::string>& code_table(std::size_t f) const {
    return code_tables_[f];
  }
  const std::vector<std::vector<std::string>>& code_tables() const {
    return code_tables_;
  }

  // Validates the row against the schema (finite numerics, known codes,
  // label in range); throws std::invalid_argument otherwise.
  void add_row(std::span<const double> values, int label);

  // New dataset holding the given rows (indices may repeat).
  Dataset subset(std::span<const std::size_t> rows) const;

  // Count of rows per class index.
  std::vector<std::size_t> class_counts() const;

  // Cell rendered back to text (numeric formatting or code lookup).
  std::string cell_text(std::size_t i, std::size_t f) const;

 private:
  Schema schema_;
  std::vector<std::vector<std::string>> code_tables_;
  std::vector<double> values_;
  std::vector<int> labels_;
};

}  // namespace limeout
