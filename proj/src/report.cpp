#include "limeout/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "limeout/errors.hpp"

namespace limeout {
namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal text that parses back to the same double.
std::string format_shortest(double v) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  (void)ec;
  return std::string(buffer, ptr);
}

std::string format_signed(double v, int decimals) {
  std::string body = format_fixed(std::abs(v), decimals);
  return (v < 0 ? "-" : "+") + body;
}

std::string join(const std::vector<std::string>& items,
                 const std::string& separator) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += separator;
    out += items[i];
  }
  return out;
}

std::string verdict_line(const FairnessVerdict& verdict) {
  if (verdict.fair)
    return "**fair** — no sensitive feature ranks in the top " +
           std::to_string(verdict.top_k) + " above the noise floor.";
  std::vector<std::string> parts;
  for (const Offender& offender : verdict.offenders)
    parts.push_back(offender.feature + " (rank " +
                    std::to_string(offender.rank) + ", mean contribution " +
                    format_signed(offender.mean_signed, 4) + ", magnitude " +
                    format_fixed(offender.mean_abs, 4) + ", floor " +
                    format_fixed(offender.threshold, 4) + ")");
  return "**unfair** — offenders: " + join(parts, "; ");
}

void render_global_table(std::ostringstream& out,
                         const GlobalExplanation& original,
                         const GlobalExplanation* ensemble, int max_rows) {
  std::size_t rows =
      std::min<std::size_t>(original.ranked.size(),
                            static_cast<std::size_t>(max_rows));
  if (ensemble)
    rows = std::max(rows, std::min<std::size_t>(
                              ensemble->ranked.size(),
                              static_cast<std::size_t>(max_rows)));
  if (ensemble) {
    out << "| rank | feature (original) | contribution | magnitude | "
           "feature (ensemble) | contribution | magnitude |\n";
    out << "|---|---|---|---|---|---|---|\n";
  } else {
    out << "| rank | feature | contribution | magnitude |\n";
    out << "|---|---|---|---|\n";
  }
  for (std::size_t r = 0; r < rows; ++r) {
    out << "| " << (r + 1) << " |";
    if (r < original.ranked.size()) {
      const GlobalFeature& f = original.ranked[r];
      out << ' ' << f.feature << " | " << format_signed(f.mean_signed, 4)
          << " | " << format_fixed(f.mean_abs, 4) << " |";
    } else {
      out << " — | — | — |";
    }
    if (ensemble) {
      if (r < ensemble->ranked.size()) {
        const GlobalFeature& f = ensemble->ranked[r];
        out << ' ' << f.feature << " | " << format_signed(f.mean_signed, 4)
            << " | " << format_fixed(f.mean_abs, 4) << " |";
      } else {
        out << " — | — | — |";
      }
    }
    out << '\n';
  }
}

ordered_json global_to_json(const GlobalExplanation& global) {
  ordered_json ranked = ordered_json::array();
  for (const GlobalFeature& f : global.ranked)
    ranked.push_back({{"feature", f.feature},
                      {"mean_signed", f.mean_signed},
                      {"mean_abs", f.mean_abs},
                      {"stderr_signed", f.stderr_signed}});
  ordered_json picked = ordered_json::array();
  for (std::size_t i : global.picked) picked.push_back(i);
  return {{"budget", global.budget}, {"picked", picked}, {"ranked", ranked}};
}

GlobalExplanation global_from_json(const ordered_json& j) {
  GlobalExplanation global;
  global.budget = j.at("budget").get<int>();
  for (const auto& i : j.at("picked"))
    global.picked.push_back(i.get<std::size_t>());
  for (const auto& f : j.at("ranked")) {
    GlobalFeature feature;
    feature.feature = f.at("feature").get<std::string>();
    feature.mean_signed = f.at("mean_signed").get<double>();
    feature.mean_abs = f.at("mean_abs").get<double>();
    feature.stderr_signed = f.at("stderr_signed").get<double>();
    global.ranked.push_back(std::move(feature));
  }
  return global;
}

ordered_json verdict_to_json(const FairnessVerdict& verdict) {
  ordered_json offenders = ordered_json::array();
  for (const Offender& o : verdict.offenders)
    offenders.push_back({{"feature", o.feature},
                         {"rank", o.rank},
                         {"mean_signed", o.mean_signed},
                         {"mean_abs", o.mean_abs},
                         {"threshold", o.threshold}});
  return {{"fair", verdict.fair},
          {"top_k", verdict.top_k},
          {"offenders", offenders}};
}

FairnessVerdict verdict_from_json(const ordered_json& j) {
  FairnessVerdict verdict;
  verdict.fair = j.at("fair").get<bool>();
  verdict.top_k = j.at("top_k").get<int>();
  for (const auto& o : j.at("offenders")) {
    Offender offender;
    offender.feature = o.at("feature").get<std::string>();
    offender.rank = o.at("rank").get<int>();
    offender.mean_signed = o.at("mean_signed").get<double>();
    offender.mean_abs = o.at("mean_abs").get<double>();
    offender.threshold = o.at("threshold").get<double>();
    verdict.offenders.push_back(std::move(offender));
  }
  return verdict;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value,
                                 std::chars_format::fixed, decimals);
  (void)ec;
  return std::string(buffer, ptr);
}

std::string render_report_markdown(const AuditReport& report) {
  std::ostringstream out;
  out << "# Process fairness audit\n\n";

  out << "## Dataset\n\n";
  out << "- rows: " << report.rows << " (train " << report.train_rows
      << ", test " << report.test_rows << ")\n";
  std::vector<std::string> features;
  for (const FeatureSpec& f : report.schema.features)
    features.push_back(f.name + (f.kind == FeatureKind::categorical
                                     ? " (categorical)"
                                     : " (numeric)"));
  out << "- features: " << join(features, ", ") << "\n";
  out << "- target: " << report.schema.target << " (classes: "
      << join(report.schema.class_labels, ", ") << ")\n";
  out << "- sensitive: " << join(report.sensitive.features, ", ") << "\n";
  out << "- explanation candidates: " << report.candidate_count << "\n\n";

  out << "## Settings\n\n";
  out << "| setting | value |\n|---|---|\n";
  out << "| split_fraction | " << format_shortest(report.settings.split_fraction)
      << " |\n";
  out << "| bins | " << report.settings.bins << " |\n";
  out << "| candidate_limit | " << report.settings.candidate_limit << " |\n";
  out << "| budget | " << report.settings.budget << " |\n";
  out << "| fairness_top_k | " << report.settings.fairness_top_k << " |\n";
  out << "| n_samples | " << report.settings.surrogate.n_samples << " |\n";
  out << "| lambda | " << format_shortest(report.settings.surrogate.lambda)
      << " |\n";
  out << "| top_k | " << report.settings.surrogate.top_k << " |\n";
  out << "| sigma | "
      << (report.settings.sigma ? format_shortest(*report.settings.sigma)
                                : std::string("default"))
      << " |\n\n";

  if (!report.config_echo.empty()) {
    out << "## Configuration\n\n```\n";
    for (const auto& [key, value] : report.config_echo)
      out << key << " = " << value << '\n';
    out << "```\n\n";
  }

  out << "## Seeds\n\n";
  out << "| stage | seed |\n|---|---|\n";
  out << "| audit | " << report.seed << " |\n";
  for (const auto& [stage, seed] : report.stage_seeds)
    out << "| " << stage << " | " << seed << " |\n";
  out << '\n';

  out << "## Accuracy\n\n";
  out << "| algorithm | model | accuracy |\n|---|---|---|\n";
  for (const AlgorithmAudit& audit : report.algorithms) {
    std::string_view name = algorithm_name(audit.spec.algorithm);
    out << "| " << name << " | Global | "
        << format_fixed(audit.original_accuracy, 4) << " |\n";
    out << "| " << name << " | Lime_out | ";
    if (audit.ensemble_built)
      out << format_fixed(audit.ensemble_accuracy, 4);
    else
      out << "—";
    out << " |\n";
  }
  out << '\n';

  for (const AlgorithmAudit& audit : report.algorithms) {
    out << "## Algorithm: " << algorithm_name(audit.spec.algorithm) << "\n\n";
    out << "- original accuracy: " << format_fixed(audit.original_accuracy, 4)
        << "\n";
    out << "- original verdict: " << verdict_line(audit.original_verdict)
        << "\n";
    if (audit.ensemble_built) {
      out << "- ensemble accuracy: " << format_fixed(audit.ensemble_accuracy, 4)
          << "\n";
      out << "- ensemble verdict: " << verdict_line(audit.ensemble_verdict)
          << "\n";
    } else {
      out << "- ensemble: not built (original already fair)\n";
    }
    out << "\n### Global contributions\n\n";
    render_global_table(out, audit.original_global,
                        audit.ensemble_built ? &audit.ensemble_global : nullptr,
                        report.settings.fairness_top_k);
    out << '\n';
  }
  return out.str();
}

std::string render_report_json(const AuditReport& report) {
  ordered_json j;
  j["rows"] = report.rows;
  j["train_rows"] = report.train_rows;
  j["test_rows"] = report.test_rows;
  j["candidates"] = report.candidate_count;

  ordered_json schema;
  schema["target"] = report.schema.target;
  schema["class_labels"] = report.schema.class_labels;
  ordered_json feats = ordered_json::array();
  for (const FeatureSpec& f : report.schema.features)
    feats.push_back({{"name", f.name},
                     {"kind", f.kind == FeatureKind::categorical
                                  ? "categorical"
                                  : "numeric"}});
  schema["features"] = feats;
  j["schema"] = schema;

  j["sensitive"] = report.sensitive.features;

  ordered_json settings;
  settings["split_fraction"] = report.settings.split_fraction;
  settings["bins"] = report.settings.bins;
  settings["candidate_limit"] = report.settings.candidate_limit;
  settings["budget"] = report.settings.budget;
  settings["fairness_top_k"] = report.settings.fairness_top_k;
  settings["n_samples"] = report.settings.surrogate.n_samples;
  settings["lambda"] = report.settings.surrogate.lambda;
  settings["top_k"] = report.settings.surrogate.top_k;
  if (report.settings.sigma)
    settings["sigma"] = *report.settings.sigma;
  else
    settings["sigma"] = nullptr;
  j["settings"] = settings;

  j["seed"] = report.seed;
  ordered_json stage_seeds = ordered_json::array();
  for (const auto& [stage, seed] : report.stage_seeds)
    stage_seeds.push_back({{"stage", stage}, {"seed", seed}});
  j["stage_seeds"] = stage_seeds;

  ordered_json config = ordered_json::array();
  for (const auto& [key, value] : report.config_echo)
    config.push_back({{"key", key}, {"value", value}});
  j["config"] = config;

  ordered_json algorithms = ordered_json::array();
  for (const AlgorithmAudit& audit : report.algorithms) {
    ordered_json a;
    a["algorithm"] = std::string(algorithm_name(audit.spec.algorithm));
    a["seed"] = audit.spec.seed;
    ordered_json hyper = ordered_json::object();
    for (const auto& [key, value] : audit.spec.hyper) hyper[key] = value;
    a["hyper"] = hyper;
    ordered_json original;
    original["accuracy"] = audit.original_accuracy;
    original["global"] = global_to_json(audit.original_global);
    original["verdict"] = verdict_to_json(audit.original_verdict);
    a["original"] = original;
    if (audit.ensemble_built) {
      ordered_json ensemble;
      ensemble["accuracy"] = audit.ensemble_accuracy;
      ensemble["global"] = global_to_json(audit.ensemble_global);
      ensemble["verdict"] = verdict_to_json(audit.ensemble_verdict);
      a["ensemble"] = ensemble;
    } else {
      a["ensemble"] = nullptr;
    }
    algorithms.push_back(a);
  }
  j["algorithms"] = algorithms;
  return j.dump(2) + "\n";
}

AuditReport parse_report_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report file: ") + e.what());
  }
  try {
    AuditReport report;
    report.rows = j.at("rows").get<std::size_t>();
    report.train_rows = j.at("train_rows").get<std::size_t>();
    report.test_rows = j.at("test_rows").get<std::size_t>();
    report.candidate_count = j.at("candidates").get<std::size_t>();

    const auto& schema = j.at("schema");
    report.schema.target = schema.at("target").get<std::string>();
    for (const auto& label : schema.at("class_labels"))
      report.schema.class_labels.push_back(label.get<std::string>());
    for (const auto& f : schema.at("features"))
      report.schema.features.push_back(
          {f.at("name").get<std::string>(),
           f.at("kind").get<std::string>() == "categorical"
               ? FeatureKind::categorical
               : FeatureKind::numeric});

    for (const auto& s : j.at("sensitive"))
      report.sensitive.features.push_back(s.get<std::string>());

    const auto& settings = j.at("settings");
    report.settings.split_fraction = settings.at("split_fraction").get<double>();
    report.settings.bins = settings.at("bins").get<int>();
    report.settings.candidate_limit = settings.at("candidate_limit").get<int>();
    report.settings.budget = settings.at("budget").get<int>();
    report.settings.fairness_top_k = settings.at("fairness_top_k").get<int>();
    report.settings.surrogate.n_samples = settings.at("n_samples").get<int>();
    report.settings.surrogate.lambda = settings.at("lambda").get<double>();
    report.settings.surrogate.top_k = settings.at("top_k").get<int>();
    if (!settings.at("sigma").is_null())
      report.settings.sigma = settings.at("sigma").get<double>();

    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("stage_seeds"))
      report.stage_seeds.emplace_back(s.at("stage").get<std::string>(),
                                      s.at("seed").get<std::uint64_t>());
    for (const auto& c : j.at("config"))
      report.config_echo.emplace_back(c.at("key").get<std::string>(),
                                      c.at("value").get<std::string>());

    for (const auto& a : j.at("algorithms")) {
      AlgorithmAudit audit;
      auto algorithm = parse_algorithm(a.at("algorithm").get<std::string>());
      if (!algorithm) throw DataError("report file: unknown algorithm");
      audit.spec.algorithm = *algorithm;
      audit.spec.seed = a.at("seed").get<std::uint64_t>();
      for (const auto& [key, value] : a.at("hyper").items())
        audit.spec.hyper[key] = value.get<double>();
      audit.original_accuracy = a.at("original").at("accuracy").get<double>();
      audit.original_global = global_from_json(a.at("original").at("global"));
      audit.original_verdict =
          verdict_from_json(a.at("original").at("verdict"));
      if (!a.at("ensemble").is_null()) {
        audit.ensemble_built = true;
        audit.ensemble_accuracy = a.at("ensemble").at("accuracy").get<double>();
        audit.ensemble_global = global_from_json(a.at("ensemble").at("global"));
        audit.ensemble_verdict =
            verdict_from_json(a.at("ensemble").at("verdict"));
      }
      report.algorithms.push_back(std::move(audit));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report file: ") + e.what());
  }
}

std::string render_explanation_text(const Explanation& explanation,
                                    std::size_t instance_index,
                                    int bar_width) {
  std::ostringstream out;
  out << "instance " << instance_index << " -> class \""
      << explanation.explained_label << "\" (p = "
      << format_fixed(explanation.predicted_probability, 4)
      << ", local R2 = " << format_fixed(explanation.local_r2, 4)
      << ", intercept = " << format_signed(explanation.intercept, 4) << ")\n\n";

  std::size_t name_width = 0;
  double max_abs = 0.0;
  for (const auto& [name, value] : explanation.contributions) {
    name_width = std::max(name_width, name.size());
    max_abs = std::max(max_abs, std::abs(value));
  }
  for (const auto& [name, value] : explanation.contributions) {
    int length = 0;
    if (max_abs > 0.0)
      length = static_cast<int>(
          std::llround(std::abs(value) / max_abs * bar_width));
    std::string left(bar_width, ' ');
    std::string right;
    if (value < 0.0)
      left.replace(bar_width - length, length, std::string(length, '#'));
    else
      right.assign(length, '#');
    out << std::string(name_width - name.size(), ' ') << name << "  "
        << format_signed(value, 4) << "  " << left << '|' << right << '\n';
  }
  return out.str();
}

std::string render_explanation_json(const Explanation& explanation,
                                    std::size_t instance_index) {
  ordered_json j;
  j["instance_index"] = instance_index;
  j["explained_class"] = explanation.explained_class;
  j["explained_label"] = explanation.explained_label;
  j["predicted_probability"] = explanation.predicted_probability;
  j["intercept"] = explanation.intercept;
  j["local_r2"] = explanation.local_r2;
  j["sigma"] = explanation.sigma;
  ordered_json config;
  config["n_samples"] = explanation.config.n_samples;
  config["lambda"] = explanation.config.lambda;
  config["top_k"] = explanation.config.top_k;
  config["seed"] = explanation.config.seed;
  j["config"] = config;
  j["instance"] = explanation.instance;
  ordered_json contributions = ordered_json::array();
  for (const auto& [feature, value] : explanation.contributions)
    contributions.push_back({{"feature", feature}, {"value", value}});
  j["contributions"] = contributions;
  return j.dump(2) + "\n";
}

std::string render_manifest_json(const RunManifest& manifest) {
  ordered_json j;
  j["command"] = manifest.command;
  ordered_json config = ordered_json::array();
  for (const auto& [key, value] : manifest.config)
    config.push_back({{"key", key}, {"value", value}});
  j["config"] = config;
  ordered_json seeds = ordered_json::array();
  for (const auto& [stage, seed] : manifest.seeds)
    seeds.push_back({{"stage", stage}, {"seed", seed}});
  j["seeds"] = seeds;
  ordered_json files = ordered_json::array();
  for (const auto& [path, digest] : manifest.files)
    files.push_back({{"path", path}, {"sha256", digest}});
  j["files"] = files;
  return j.dump(2) + "\n";
}

}  // namespace limeout
