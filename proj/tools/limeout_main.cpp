// limeout — process-fairness audits for tabular classifiers.
//
// Verbs: audit, explain, train, synth.  Each reads a flat key=value config
// (--config) with an optional --seed override.  Exit codes: 0 success,
// 2 configuration problem, 3 data problem, 4 degenerate training or
// explanation, 1 anything else.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "limeout/audit.hpp"
#include "limeout/classifier.hpp"
#include "limeout/config.hpp"
#include "limeout/csv.hpp"
#include "limeout/errors.hpp"
#include "limeout/lime.hpp"
#include "limeout/model_io.hpp"
#include "limeout/report.hpp"
#include "limeout/rng.hpp"
#include "limeout/sha256.hpp"
#include "limeout/stats.hpp"
#include "limeout/synth.hpp"
#include "limeout/version.hpp"

namespace fs = std::filesystem;
using namespace limeout;

namespace {

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_bytes(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Collects output files and renders the replay manifest last, so every
// listed digest covers final bytes.
class OutputSet {
 public:
  OutputSet(fs::path dir, std::string command, const KeyValueConfig& config)
      : dir_(std::move(dir)), command_(std::move(command)) {
    manifest_.command = command_;
    manifest_.config = config.sorted_entries();
    fs::create_directories(dir_);
  }

  void add_seed(const std::string& stage, std::uint64_t seed) {
    manifest_.seeds.emplace_back(stage, seed);
  }

  void write(const std::string& name, const std::string& content) {
    write_file_bytes(dir_ / name, content);
    manifest_.files.emplace_back(name, sha256_hex(content));
    std::cout << "wrote " << (dir_ / name).string() << '\n';
  }

  // Digest a file some other writer already produced in the output dir.
  void note(const std::string& name) {
    manifest_.files.emplace_back(name, sha256_hex(read_file_bytes(dir_ / name)));
    std::cout << "wrote " << (dir_ / name).string() << '\n';
  }

  void finish() {
    write_file_bytes(dir_ / "manifest.json", render_manifest_json(manifest_));
    std::cout << "wrote " << (dir_ / "manifest.json").string() << '\n';
  }

 private:
  fs::path dir_;
  std::string command_;
  RunManifest manifest_;
};

std::uint64_t require_seed(const KeyValueConfig& config,
                           const std::optional<std::uint64_t>& override_seed) {
  if (override_seed) return *override_seed;
  if (!config.has("seed"))
    throw ConfigError("config key 'seed' is required (or pass --seed)");
  return config.get_seed("seed", 0);
}

int to_int(const std::string& key, long long value) {
  if (value < std::numeric_limits<int>::min() ||
      value > std::numeric_limits<int>::max())
    throw ConfigError("config key '" + key + "' is out of range");
  return static_cast<int>(value);
}

double parse_double_item(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("config key '" + key + "' needs numbers, got '" + text +
                      "'");
  return v;
}

std::map<std::string, FeatureKind> kind_overrides(const KeyValueConfig& config) {
  std::map<std::string, FeatureKind> overrides;
  if (config.has("categorical"))
    for (const std::string& name : config.get_list("categorical"))
      overrides[name] = FeatureKind::categorical;
  if (config.has("numeric"))
    for (const std::string& name : config.get_list("numeric")) {
      if (overrides.count(name))
        throw ConfigError("column '" + name +
                          "' listed as both categorical and numeric");
      overrides[name] = FeatureKind::numeric;
    }
  return overrides;
}

// Every dotted key must target one of the algorithms actually being run;
// anything else is a silent-typo hazard.
void check_override_prefixes(const KeyValueConfig& config,
                             const std::set<std::string>& algorithms) {
  for (const auto& [key, value] : config.sorted_entries()) {
    (void)value;
    std::size_t dot = key.find('.');
    if (dot == std::string::npos) continue;
    std::string prefix = key.substr(0, dot);
    if (!algorithms.count(prefix))
      throw ConfigError("config key '" + key +
                        "' does not match any requested algorithm");
  }
}

fs::path output_dir(const KeyValueConfig& config) {
  return fs::path(config.get_string("output_dir", "."));
}

int cmd_synth(const KeyValueConfig& config,
              const std::optional<std::uint64_t>& seed_override) {
  config.require_known_keys({"rows", "noise_features", "bias_strength",
                             "redundancy", "seed", "output_dir", "out"});
  check_override_prefixes(config, {});
  PlantedBiasOptions options;
  long long rows = config.get_int("rows", 1000);
  if (rows < 0) throw ConfigError("config key 'rows' must be non-negative");
  options.rows = static_cast<std::size_t>(rows);
  options.noise_features = to_int("noise_features",
                                  config.get_int("noise_features", 5));
  if (config.has("bias_strength")) {
    options.bias_strengths.clear();
    for (const std::string& item : config.get_list("bias_strength"))
      options.bias_strengths.push_back(parse_double_item("bias_strength", item));
  }
  options.redundancy = config.get_double("redundancy", 0.0);
  options.seed = require_seed(config, seed_override);

  Dataset data = generate_planted_bias(options);

  OutputSet outputs(output_dir(config), "synth", config);
  outputs.add_seed("synth", options.seed);
  std::string name = config.get_string("out", "synthetic.csv");
  write_csv(data, (output_dir(config) / name).string());
  outputs.note(name);
  outputs.finish();
  return 0;
}

int cmd_train(const KeyValueConfig& config,
              const std::optional<std::uint64_t>& seed_override) {
  config.require_known_keys({"data", "target", "categorical", "numeric",
                             "algorithm", "mask", "seed", "output_dir", "out"});
  std::string algorithm_text = config.get_string("algorithm");
  auto algorithm = parse_algorithm(algorithm_text);
  if (!algorithm)
    throw ConfigError("unknown algorithm: " + algorithm_text);
  check_override_prefixes(config, {algorithm_text});

  Dataset data = load_csv(config.get_string("data"),
                          config.get_string("target"), kind_overrides(config));

  ClassifierSpec spec;
  spec.algorithm = *algorithm;
  spec.hyper = config.prefixed_doubles(algorithm_text);
  spec.seed = require_seed(config, seed_override);
  resolved_hyperparameters(spec);  // reject bad overrides before training

  FeatureMask mask;
  if (config.has("mask"))
    for (const std::string& name : config.get_list("mask"))
      mask.dropped.insert(name);
  try {
    mask.validate(data.schema());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  TrainedModel model = train(spec, data, mask);
  double train_accuracy = accuracy(model, data);

  OutputSet outputs(output_dir(config), "train", config);
  outputs.add_seed("train", spec.seed);
  std::string name = config.get_string("out", algorithm_text + ".model");
  outputs.write(name, serialize_model(model));
  outputs.finish();
  std::cout << algorithm_text << ": training accuracy "
            << format_fixed(train_accuracy, 4) << '\n';
  return 0;
}

int cmd_explain(const KeyValueConfig& config,
                const std::optional<std::uint64_t>& seed_override) {
  config.require_known_keys({"model", "data", "instance", "n_samples", "sigma",
                             "lambda", "top_k", "bins", "explained_class",
                             "seed", "output_dir", "out"});
  check_override_prefixes(config, {});
  TrainedModel model = load_model(config.get_string("model"));
  const Schema& schema = model.schema();

  std::map<std::string, FeatureKind> kinds;
  for (const FeatureSpec& f : schema.features) kinds[f.name] = f.kind;
  Dataset data = load_csv(config.get_string("data"), schema.target, kinds);
  if (!(data.schema() == schema))
    throw DataError("dataset columns or classes do not match the model");
  if (data.code_tables() != model.code_tables())
    throw DataError("dataset categorical codes do not match the model");

  long long index = config.get_int("instance", -1);
  if (index < 0 || static_cast<std::size_t>(index) >= data.size())
    throw ConfigError("config key 'instance' must name a row in 0.." +
                      std::to_string(data.size() - 1));

  std::uint64_t root_seed = require_seed(config, seed_override);
  SurrogateConfig surrogate;
  surrogate.n_samples = to_int("n_samples", config.get_int("n_samples", 5000));
  surrogate.lambda = config.get_double("lambda", 1e-3);
  surrogate.top_k = to_int("top_k", config.get_int("top_k", 10));
  surrogate.seed = derive_seed(root_seed, seed_stream::kInstance,
                               static_cast<std::uint64_t>(index));

  KernelConfig kernel;
  if (config.has("sigma")) kernel.sigma = config.get_double("sigma", 0.0);

  std::optional<int> explained_class;
  if (config.has("explained_class")) {
    std::string label = config.get_string("explained_class");
    const auto& labels = schema.class_labels;
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
      throw ConfigError("explained_class '" + label + "' is not a class");
    explained_class = static_cast<int>(it - labels.begin());
  }

  FeatureStats stats =
      compute_stats(data, to_int("bins", config.get_int("bins", 4)));
  Explanation explanation =
      explain_instance(model, data.row(static_cast<std::size_t>(index)), stats,
                       surrogate, kernel, explained_class);

  OutputSet outputs(output_dir(config), "explain", config);
  outputs.add_seed("explain", root_seed);
  outputs.add_seed("instance", surrogate.seed);
  std::string name = config.get_string("out", "explanation");
  outputs.write(name + ".txt",
                render_explanation_text(explanation,
                                        static_cast<std::size_t>(index)));
  outputs.write(name + ".json",
                render_explanation_json(explanation,
                                        static_cast<std::size_t>(index)));
  outputs.finish();
  return 0;
}

int cmd_audit(const KeyValueConfig& config,
              const std::optional<std::uint64_t>& seed_override) {
  config.require_known_keys({"data", "target", "categorical", "numeric",
                             "sensitive", "algorithms", "seed",
                             "split_fraction", "bins", "n_samples", "sigma",
                             "lambda", "top_k", "budget", "fairness_top_k",
                             "candidate_limit", "output_dir"});
  Dataset data = load_csv(config.get_string("data"),
                          config.get_string("target"), kind_overrides(config));

  SensitiveSet sensitive;
  sensitive.features = config.get_list("sensitive");

  std::vector<std::string> names;
  if (config.has("algorithms"))
    names = config.get_list("algorithms");
  else
    for (Algorithm a : all_algorithms())
      names.emplace_back(algorithm_name(a));
  check_override_prefixes(config,
                          std::set<std::string>(names.begin(), names.end()));

  std::uint64_t audit_seed = require_seed(config, seed_override);
  std::vector<ClassifierSpec> specs;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto algorithm = parse_algorithm(names[i]);
    if (!algorithm) throw ConfigError("unknown algorithm: " + names[i]);
    if (!seen.insert(names[i]).second)
      throw ConfigError("algorithm listed twice: " + names[i]);
    ClassifierSpec spec;
    spec.algorithm = *algorithm;
    spec.hyper = config.prefixed_doubles(names[i]);
    spec.seed = derive_seed(audit_seed, seed_stream::kTrain, i);
    resolved_hyperparameters(spec);
    specs.push_back(std::move(spec));
  }

  AuditSettings settings;
  settings.split_fraction = config.get_double("split_fraction", 0.7);
  settings.bins = to_int("bins", config.get_int("bins", 4));
  settings.candidate_limit =
      to_int("candidate_limit", config.get_int("candidate_limit", 200));
  settings.budget = to_int("budget", config.get_int("budget", 15));
  settings.fairness_top_k =
      to_int("fairness_top_k", config.get_int("fairness_top_k", 10));
  settings.surrogate.n_samples =
      to_int("n_samples", config.get_int("n_samples", 5000));
  settings.surrogate.lambda = config.get_double("lambda", 1e-3);
  settings.surrogate.top_k = to_int("top_k", config.get_int("top_k", 10));
  if (config.has("sigma")) settings.sigma = config.get_double("sigma", 0.0);

  AuditRun run = run_audits(specs, data, sensitive, settings, audit_seed);
  run.report.config_echo = config.sorted_entries();

  OutputSet outputs(output_dir(config), "audit", config);
  outputs.add_seed("audit", audit_seed);
  for (const auto& [stage, seed] : run.report.stage_seeds)
    outputs.add_seed(stage, seed);

  outputs.write("report.md", render_report_markdown(run.report));
  outputs.write("report.json", render_report_json(run.report));
  for (const AuditOutcome& outcome : run.outcomes) {
    std::string name(algorithm_name(outcome.summary.spec.algorithm));
    outputs.write(name + "_original.model", serialize_model(outcome.original));
    for (std::size_t k = 0; k < outcome.pool_members.size(); ++k)
      outputs.write(name + "_member_" + std::to_string(k) + ".model",
                    serialize_model(outcome.pool_members[k]));
  }
  outputs.finish();

  for (const AlgorithmAudit& audit : run.report.algorithms) {
    std::cout << algorithm_name(audit.spec.algorithm) << ": "
              << (audit.original_verdict.fair ? "fair" : "unfair")
              << ", accuracy " << format_fixed(audit.original_accuracy, 4);
    if (audit.ensemble_built)
      std::cout << "; ensemble "
                << (audit.ensemble_verdict.fair ? "fair" : "unfair")
                << ", accuracy " << format_fixed(audit.ensemble_accuracy, 4);
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process-fairness audits for tabular classifiers"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  struct VerbArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
  };
  std::map<std::string, VerbArgs> args;
  for (const char* verb : {"audit", "explain", "train", "synth"}) {
    CLI::App* sub = app.add_subcommand(verb);
    sub->add_option("--config", args[verb].config_path, "key=value config file")
        ->required();
    sub->add_option("--seed", args[verb].seed, "override the config's seed");
  }
  app.get_subcommand("audit")->description(
      "train, explain, judge fairness, and repair with a dropout ensemble");
  app.get_subcommand("explain")->description(
      "explain one instance of a saved model");
  app.get_subcommand("train")->description("train and save one model");
  app.get_subcommand("synth")->description(
      "generate a planted-bias synthetic dataset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string verb = app.get_subcommands().front()->get_name();
    KeyValueConfig config = KeyValueConfig::parse_file(args[verb].config_path);
    if (verb == "audit") return cmd_audit(config, args[verb].seed);
    if (verb == "explain") return cmd_explain(config, args[verb].seed);
    if (verb == "train") return cmd_train(config, args[verb].seed);
    return cmd_synth(config, args[verb].seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateNeighborhoodError& e) {
    std::cerr << "degenerate neighborhood: " << e.what() << '\n';
    return 4;
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
