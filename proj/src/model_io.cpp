#include "limeout/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "limeout/errors.hpp"

namespace limeout {
namespace {

// Hexadecimal float text (no 0x prefix): locale-independent and
// bit-exact on round trip.
std::string hex_double(double v) {
  char buffer[64];
  auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, v, std::chars_format::hex);
  (void)ec;
  return std::string(buffer, ptr);
}

double parse_hex_double(std::string_view text) {
  double v = 0.0;
  bool negative = !text.empty() && text.front() == '-';
  if (negative) text.remove_prefix(1);
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v,
                      std::chars_format::hex);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw DataError("model file: bad float '" + std::string(text) + "'");
  return negative ? -v : v;
}

long long parse_int(std::string_view text, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw DataError(std::string("model file: bad ") + what + " '" +
                    std::string(text) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw DataError(std::string("model file: bad ") + what + " '" +
                    std::string(text) + "'");
  return v;
}

void write_tree(std::ostringstream& out, const DecisionTree& tree) {
  out << "tree " << tree.nodes.size() << '\n';
  for (const TreeNode& node : tree.nodes) {
    if (node.is_leaf()) {
      out << "node leaf";
      for (double p : node.distribution) out << ' ' << hex_double(p);
      out << '\n';
    } else {
      out << "node " << (node.categorical ? "cat" : "num") << ' '
          << node.feature << ' ' << hex_double(node.split_value) << ' '
          << node.left << ' ' << node.right << '\n';
    }
  }
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : stream_(text) {}

  // Next non-empty line; throws on end of input.
  std::string next(const char* context) {
    std::string line;
    while (std::getline(stream_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return line;
    }
    throw DataError(std::string("model file: truncated before ") + context);
  }

 private:
  std::istringstream stream_;
};

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t space = line.find(' ', i);
    std::size_t stop = space == std::string::npos ? line.size() : space;
    if (stop > i) tokens.push_back(line.substr(i, stop - i));
    i = stop + 1;
  }
  return tokens;
}

// First word and the remainder of the line (which may contain spaces).
std::pair<std::string, std::string> split_head(const std::string& line) {
  std::size_t space = line.find(' ');
  if (space == std::string::npos) return {line, ""};
  return {line.substr(0, space), line.substr(space + 1)};
}

DecisionTree read_tree(LineReader& reader, std::size_t num_classes,
                       std::size_t dimension) {
  std::string header = reader.next("tree header");
  auto tokens = split_tokens(header);
  if (tokens.size() != 2 || tokens[0] != "tree")
    throw DataError("model file: expected a tree header, found '" + header + "'");
  long long count = parse_int(tokens[1], "node count");
  if (count < 1) throw DataError("model file: tree with no nodes");

  DecisionTree tree;
  for (long long n = 0; n < count; ++n) {
    auto node_tokens = split_tokens(reader.next("tree node"));
    if (node_tokens.size() < 2 || node_tokens[0] != "node")
      throw DataError("model file: expected a node line");
    TreeNode node;
    if (node_tokens[1] == "leaf") {
      if (node_tokens.size() != 2 + num_classes)
        throw DataError("model file: leaf distribution width mismatch");
      for (std::size_t k = 0; k < num_classes; ++k)
        node.distribution.push_back(parse_hex_double(node_tokens[2 + k]));
    } else if (node_tokens[1] == "num" || node_tokens[1] == "cat") {
      if (node_tokens.size() != 6)
        throw DataError("model file: malformed split node");
      node.categorical = node_tokens[1] == "cat";
      node.feature = static_cast<int>(parse_int(node_tokens[2], "feature index"));
      node.split_value = parse_hex_double(node_tokens[3]);
      node.left = static_cast<int>(parse_int(node_tokens[4], "child index"));
      node.right = static_cast<int>(parse_int(node_tokens[5], "child index"));
      if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= dimension)
        throw DataError("model file: split feature out of range");
      if (node.left < 0 || node.left >= count || node.right < 0 ||
          node.right >= count)
        throw DataError("model file: child index out of range");
    } else {
      throw DataError("model file: unknown node kind '" + node_tokens[1] + "'");
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  const Schema& schema = model.schema();
  std::ostringstream out;
  out << "limeout-model v1\n";
  out << "algorithm " << algorithm_name(model.spec().algorithm) << '\n';
  out << "seed " << model.spec().seed << '\n';
  for (const auto& [key, value] : resolved_hyperparameters(model.spec()))
    out << "hyper " << key << ' ' << hex_double(value) << '\n';
  out << "target " << schema.target << '\n';
  for (const auto& label : schema.class_labels) out << "class " << label << '\n';
  for (std::size_t f = 0; f < schema.dimension(); ++f) {
    const FeatureSpec& feature = schema.features[f];
    if (feature.kind == FeatureKind::categorical) {
      out << "feature categorical " << feature.name << '\n';
      for (const auto& code : model.code_tables()[f])
        out << "code " << code << '\n';
    } else {
      out << "feature numeric " << feature.name << '\n';
    }
  }
  for (const auto& name : model.mask().dropped) out << "mask " << name << '\n';

  if (const auto* logistic = std::get_if<LogisticParams>(&model.params())) {
    out << "params logistic\n";
    for (std::size_t j = 0; j < logistic->mean.size(); ++j)
      out << "standardize " << hex_double(logistic->mean[j]) << ' '
          << hex_double(logistic->scale[j]) << '\n';
    for (const LogisticUnit& unit : logistic->units) {
      out << "unit " << hex_double(unit.intercept);
      for (double w : unit.weights) out << ' ' << hex_double(w);
      out << '\n';
    }
  } else if (const auto* tree = std::get_if<TreeParams>(&model.params())) {
    out << "params tree\n";
    write_tree(out, tree->tree);
  } else if (const auto* forest = std::get_if<ForestParams>(&model.params())) {
    out << "params forest\n";
    out << "members " << forest->trees.size() << '\n';
    for (const DecisionTree& t : forest->trees) write_tree(out, t);
  } else {
    const auto& ada = std::get<AdaBoostParams>(model.params());
    out << "params adaboost\n";
    out << "members " << ada.stumps.size() << '\n';
    for (std::size_t m = 0; m < ada.stumps.size(); ++m) {
      out << "alpha " << hex_double(ada.alphas[m]) << '\n';
      write_tree(out, ada.stumps[m]);
    }
  }
  out << "end\n";
  return out.str();
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << serialize_model(model);
  if (!out) throw DataError("failed writing model file: " + path);
}

TrainedModel parse_model(const std::string& text) {
  LineReader reader(text);
  if (reader.next("header") != "limeout-model v1")
    throw DataError("model file: bad header (expected 'limeout-model v1')");

  auto [algo_key, algo_value] = split_head(reader.next("algorithm"));
  if (algo_key != "algorithm")
    throw DataError("model file: expected the algorithm line");
  auto algorithm = parse_algorithm(algo_value);
  if (!algorithm)
    throw DataError("model file: unknown algorithm '" + algo_value + "'");

  ClassifierSpec spec;
  spec.algorithm = *algorithm;

  auto [seed_key, seed_value] = split_head(reader.next("seed"));
  if (seed_key != "seed") throw DataError("model file: expected the seed line");
  spec.seed = parse_u64(seed_value, "seed");

  Schema schema;
  std::vector<std::vector<std::string>> code_tables;
  FeatureMask mask;
  std::string params_kind;

  std::string line = reader.next("schema");
  while (true) {
    auto [key, rest] = split_head(line);
    if (key == "hyper") {
      auto [name, value] = split_head(rest);
      if (name.empty() || value.empty())
        throw DataError("model file: malformed hyper line");
      spec.hyper[name] = parse_hex_double(value);
    } else if (key == "target") {
      schema.target = rest;
    } else if (key == "class") {
      schema.class_labels.push_back(rest);
    } else if (key == "feature") {
      auto [kind, name] = split_head(rest);
      if (kind == "numeric")
        schema.features.push_back({name, FeatureKind::numeric});
      else if (kind == "categorical")
        schema.features.push_back({name, FeatureKind::categorical});
      else
        throw DataError("model file: unknown feature kind '" + kind + "'");
      code_tables.resize(schema.features.size());
    } else if (key == "code") {
      if (schema.features.empty() ||
          schema.features.back().kind != FeatureKind::categorical)
        throw DataError("model file: code line outside a categorical feature");
      code_tables.back().push_back(rest);
    } else if (key == "mask") {
      mask.dropped.insert(rest);
    } else if (key == "params") {
      params_kind = rest;
      break;
    } else {
      throw DataError("model file: unexpected line '" + line + "'");
    }
    line = reader.next("schema");
  }

  if (params_kind != std::string(algorithm_name(spec.algorithm)) &&
      !(params_kind == "forest" &&
        (spec.algorithm == Algorithm::random_forest ||
         spec.algorithm == Algorithm::bagging)))
    throw DataError("model file: params section does not match the algorithm");

  std::size_t num_classes = schema.class_labels.size();
  std::size_t dimension = schema.features.size();
  if (num_classes < 2 || dimension == 0)
    throw DataError("model file: incomplete schema");

  ModelParams params{LogisticParams{}};
  if (params_kind == "logistic") {
    LogisticParams logistic;
    std::size_t active_count = dimension - mask.dropped.size();
    for (std::size_t j = 0; j < active_count; ++j) {
      auto tokens = split_tokens(reader.next("standardization"));
      if (tokens.size() != 3 || tokens[0] != "standardize")
        throw DataError("model file: expected a standardize line");
      logistic.mean.push_back(parse_hex_double(tokens[1]));
      logistic.scale.push_back(parse_hex_double(tokens[2]));
    }
    std::size_t unit_count = num_classes == 2 ? 1 : num_classes;
    for (std::size_t u = 0; u < unit_count; ++u) {
      auto tokens = split_tokens(reader.next("logistic unit"));
      if (tokens.size() != 2 + active_count || tokens[0] != "unit")
        throw DataError("model file: malformed logistic unit");
      LogisticUnit unit;
      unit.intercept = parse_hex_double(tokens[1]);
      for (std::size_t j = 0; j < active_count; ++j)
        unit.weights.push_back(parse_hex_double(tokens[2 + j]));
      logistic.units.push_back(std::move(unit));
    }
    params = std::move(logistic);
  } else if (params_kind == "tree") {
    params = TreeParams{read_tree(reader, num_classes, dimension)};
  } else if (params_kind == "forest") {
    auto [key, value] = split_head(reader.next("member count"));
    if (key != "members")
      throw DataError("model file: expected the members line");
    long long count = parse_int(value, "member count");
    if (count < 1) throw DataError("model file: forest with no trees");
    ForestParams forest;
    for (long long t = 0; t < count; ++t)
      forest.trees.push_back(read_tree(reader, num_classes, dimension));
    params = std::move(forest);
  } else if (params_kind == "adaboost") {
    auto [key, value] = split_head(reader.next("member count"));
    if (key != "members")
      throw DataError("model file: expected the members line");
    long long count = parse_int(value, "member count");
    if (count < 1) throw DataError("model file: adaboost with no stumps");
    AdaBoostParams ada;
    for (long long m = 0; m < count; ++m) {
      auto [alpha_key, alpha_value] = split_head(reader.next("alpha"));
      if (alpha_key != "alpha")
        throw DataError("model file: expected an alpha line");
      ada.alphas.push_back(parse_hex_double(alpha_value));
      ada.stumps.push_back(read_tree(reader, num_classes, dimension));
    }
    params = std::move(ada);
  } else {
    throw DataError("model file: unknown params kind '" + params_kind + "'");
  }

  if (reader.next("end") != "end")
    throw DataError("model file: missing end marker");

  try {
    return TrainedModel::from_parts(std::move(spec), std::move(mask),
                                    std::move(schema), std::move(code_tables),
                                    std::move(params));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

}  // namespace limeout
