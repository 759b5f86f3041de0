#include "limeout/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace limeout {

void Schema::validate() const {
  if (features.empty())
    throw std::invalid_argument("schema has no features");
  if (class_labels.size() < 2)
    throw std::invalid_argument("schema needs at least two class labels");
  if (target.empty())
    throw std::invalid_argument("schema target name is empty");
  std::set<std::string> seen;
  for (const auto& f : features) {
    if (f.name.empty())
      throw std::invalid_argument("schema has an empty feature name");
    if (f.name.find('\n') != std::string::npos ||
        f.name.find('\r') != std::string::npos)
      throw std::invalid_argument("feature name contains a line break: " +
                                  f.name);
    if (!seen.insert(f.name).second)
      throw std::invalid_argument("duplicate feature name: " + f.name);
    if (f.name == target)
      throw std::invalid_argument("target collides with feature: " + f.name);
  }
  std::set<std::string> labels(class_labels.begin(), class_labels.end());
  if (labels.size() != class_labels.size())
    throw std::invalid_argument("duplicate class label");
}

Dataset::Dataset(Schema schema, std::vector<std::vector<std::string>> code_tables)
    : schema_(std::move(schema)), code_tables_(std::move(code_tables)) {
  schema_.validate();
  if (code_tables_.empty()) code_tables_.resize(schema_.dimension());
  if (code_tables_.size() != schema_.dimension())
    throw std::invalid_argument("one code table required per feature");
  for (std::size_t f = 0; f < schema_.dimension(); ++f) {
    bool cat = schema_.features[f].kind == FeatureKind::categorical;
    if (cat && code_tables_[f].empty())
      throw std::invalid_argument("categorical feature has an empty code table: " +
                                  schema_.features[f].name);
    if (!cat && !code_tables_[f].empty())
      throw std::invalid_argument("numeric feature has a code table: " +
                                  schema_.features[f].name);
  }
}

void Dataset::add_row(std::span<const double> values, int label) {
  if (values.size() != schema_.dimension())
    throw std::invalid_argument("row width does not match schema");
  if (label < 0 || static_cast<std::size_t>(label) >= schema_.num_classes())
    throw std::invalid_argument("label index out of range");
  for (std::size_t f = 0; f < values.size(); ++f) {
    double v = values[f];
    if (schema_.features[f].kind == FeatureKind::numeric) {
      if (!std::isfinite(v))
        throw std::invalid_argument("non-finite value for numeric feature " +
                                    schema_.features[f].name);
    } else {
      if (v != std::floor(v) || v < 0 ||
          v >= static_cast<double>(code_tables_[f].size()))
        throw std::invalid_argument("unknown code for categorical feature " +
                                    schema_.features[f].name);
    }
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(schema_, code_tables_);
  for (std::size_t i : rows) {
    if (i >= size()) throw std::invalid_argument("row index out of range");
    out.values_.insert(out.values_.end(), row(i).begin(), row(i).end());
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(schema_.num_classes(), 0);
  for (int l : labels_) ++counts[l];
  return counts;
}

std::string Dataset::cell_text(std::size_t i, std::size_t f) const {
  double v = value(i, f);
  if (schema_.features[f].kind == FeatureKind::categorical)
    return code_tables_[f][static_cast<std::size_t>(v)];
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

}  // namespace limeout
