#include "limeout/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "limeout/errors.hpp"

namespace limeout {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_finite_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;  // from_chars rejects '+'
  if (begin == end) return false;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

// One CSV record: comma-separated, double quotes around fields that need
// them, doubled quotes as the escape.  Embedded line breaks are not
// supported (records are physical lines).
std::vector<std::string> parse_record(const std::string& line,
                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (true) {
    current.clear();
    if (i < n && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < n) {
        if (line[i] == '"') {
          if (i + 1 < n && line[i + 1] == '"') {
            current.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          current.push_back(line[i++]);
        }
      }
      if (!closed)
        throw DataError("line " + std::to_string(line_no) +
                        ": unterminated quoted field");
      if (i < n && line[i] != ',')
        throw DataError("line " + std::to_string(line_no) +
                        ": text after closing quote");
      fields.push_back(current);
    } else {
      std::size_t comma = line.find(',', i);
      std::size_t stop = comma == std::string::npos ? n : comma;
      fields.push_back(trim(line.substr(i, stop - i)));
      i = stop;
    }
    if (i >= n) break;
    ++i;  // skip comma
    if (i == n) {  // trailing comma -> final empty field
      fields.push_back("");
      break;
    }
  }
  return fields;
}

std::string quote_if_needed(const std::string& field) {
  bool needs = field.find_first_of(",\"\n\r") != std::string::npos ||
               (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render_double(double v) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  (void)ec;
  return std::string(buffer, ptr);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target,
                 const std::map<std::string, FeatureKind>& kind_overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  // Physical lines; tolerate CRLF and a missing final newline.
  std::vector<std::pair<std::string, std::size_t>> lines;
  std::size_t start = 0, line_no = 1;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t stop = nl == std::string::npos ? text.size() : nl;
    std::string line = text.substr(start, stop - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.emplace_back(line, line_no);
    if (nl == std::string::npos) break;
    start = nl + 1;
    ++line_no;
  }
  if (lines.empty()) throw DataError("empty data file: " + path);

  std::vector<std::string> header = parse_record(lines[0].first, lines[0].second);
  int target_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == target) target_col = static_cast<int>(c);
  if (target_col < 0)
    throw DataError("target column not found: " + target);
  for (const auto& [name, kind] : kind_overrides) {
    (void)kind;
    if (std::find(header.begin(), header.end(), name) == header.end())
      throw ConfigError("column kind override names an unknown column: " + name);
    if (name == target)
      throw ConfigError("target column cannot take a kind override: " + name);
  }

  std::vector<std::vector<std::string>> cells;
  cells.reserve(lines.size() - 1);
  std::vector<std::size_t> cell_lines;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto fields = parse_record(lines[r].first, lines[r].second);
    if (fields.size() != header.size())
      throw DataError("line " + std::to_string(lines[r].second) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c)
      if (fields[c].empty())
        throw DataError("line " + std::to_string(lines[r].second) +
                        ": empty value in column '" + header[c] + "'");
    cells.push_back(std::move(fields));
    cell_lines.push_back(lines[r].second);
  }
  if (cells.empty()) throw DataError("data file has a header but no rows: " + path);

  // Kind inference: numeric when every cell parses as a finite real.
  std::size_t width = header.size();
  Schema schema;
  schema.target = target;
  std::vector<int> feature_cols;
  for (std::size_t c = 0; c < width; ++c) {
    if (static_cast<int>(c) == target_col) continue;
    FeatureKind kind;
    auto it = kind_overrides.find(header[c]);
    if (it != kind_overrides.end()) {
      kind = it->second;
    } else {
      kind = FeatureKind::numeric;
      double v;
      for (const auto& row : cells)
        if (!parse_finite_double(row[c], v)) {
          kind = FeatureKind::categorical;
          break;
        }
    }
    schema.features.push_back({header[c], kind});
    feature_cols.push_back(static_cast<int>(c));
  }

  // Class labels and categorical codes in first-appearance order.
  std::vector<std::string> class_labels;
  std::map<std::string, int> label_index;
  for (const auto& row : cells) {
    const std::string& label = row[target_col];
    if (label_index.emplace(label, static_cast<int>(class_labels.size())).second)
      class_labels.push_back(label);
  }
  if (class_labels.size() < 2)
    throw DataError("target column '" + target +
                    "' has fewer than two distinct values");
  schema.class_labels = class_labels;

  std::vector<std::vector<std::string>> code_tables(schema.dimension());
  std::vector<std::map<std::string, int>> code_index(schema.dimension());
  for (std::size_t f = 0; f < schema.dimension(); ++f) {
    if (schema.features[f].kind != FeatureKind::categorical) continue;
    for (const auto& row : cells) {
      const std::string& cell = row[feature_cols[f]];
      if (code_index[f].emplace(cell, static_cast<int>(code_tables[f].size()))
              .second)
        code_tables[f].push_back(cell);
    }
  }

  Dataset data(schema, code_tables);
  std::vector<double> values(schema.dimension());
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t f = 0; f < schema.dimension(); ++f) {
      const std::string& cell = cells[r][feature_cols[f]];
      if (schema.features[f].kind == FeatureKind::numeric) {
        double v;
        if (!parse_finite_double(cell, v))
          throw DataError("line " + std::to_string(cell_lines[r]) +
                          ": cannot parse '" + cell + "' in numeric column '" +
                          schema.features[f].name + "'");
        values[f] = v;
      } else {
        values[f] = code_index[f].at(cell);
      }
    }
    data.add_row(values, label_index.at(cells[r][target_col]));
  }
  return data;
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write data file: " + path);
  const Schema& schema = data.schema();
  for (std::size_t f = 0; f < schema.dimension(); ++f) {
    if (f) out << ',';
    out << quote_if_needed(schema.features[f].name);
  }
  out << ',' << quote_if_needed(schema.target) << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t f = 0; f < schema.dimension(); ++f) {
      if (f) out << ',';
      if (schema.features[f].kind == FeatureKind::categorical)
        out << quote_if_needed(
            data.code_table(f)[static_cast<std::size_t>(data.value(i, f))]);
      else
        out << render_double(data.value(i, f));
    }
    out << ',' << quote_if_needed(schema.class_labels[data.label(i)]) << '\n';
  }
  if (!out) throw DataError("failed writing data file: " + path);
}

}  // namespace limeout
