// Python bindings for the limeout core: data loading, synthesis, training,
// local/global explanations, fairness audits, and model persistence.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "limeout/audit.hpp"
#include "limeout/classifier.hpp"
#include "limeout/csv.hpp"
#include "limeout/errors.hpp"
#include "limeout/global_explanation.hpp"
#include "limeout/lime.hpp"
#include "limeout/model_io.hpp"
#include "limeout/report.hpp"
#include "limeout/rng.hpp"
#include "limeout/split.hpp"
#include "limeout/stats.hpp"
#include "limeout/synth.hpp"
#include "limeout/version.hpp"

namespace py = pybind11;
using namespace limeout;

namespace {

Algorithm algorithm_from_name(const std::string& name) {
  auto algorithm = parse_algorithm(name);
  if (!algorithm) throw ConfigError("unknown algorithm: " + name);
  return *algorithm;
}

ClassifierSpec make_spec(const std::string& algorithm,
                         const std::map<std::string, double>& hyper,
                         std::uint64_t seed) {
  ClassifierSpec spec;
  spec.algorithm = algorithm_from_name(algorithm);
  spec.hyper = hyper;
  spec.seed = seed;
  return spec;
}

FeatureMask make_mask(const std::vector<std::string>& dropped) {
  FeatureMask mask;
  mask.dropped.insert(dropped.begin(), dropped.end());
  return mask;
}

SensitiveSet make_sensitive(const std::vector<std::string>& features) {
  SensitiveSet sensitive;
  sensitive.features = features;
  return sensitive;
}

SurrogateConfig make_surrogate(int n_samples, double lambda, int top_k,
                               std::uint64_t seed) {
  SurrogateConfig config;
  config.n_samples = n_samples;
  config.lambda = lambda;
  config.top_k = top_k;
  config.seed = seed;
  return config;
}

std::map<std::string, FeatureKind> make_kind_overrides(
    const std::map<std::string, std::string>& overrides) {
  std::map<std::string, FeatureKind> kinds;
  for (const auto& [name, kind] : overrides) {
    if (kind == "numeric")
      kinds[name] = FeatureKind::numeric;
    else if (kind == "categorical")
      kinds[name] = FeatureKind::categorical;
    else
      throw ConfigError("kind must be 'numeric' or 'categorical', got '" +
                        kind + "'");
  }
  return kinds;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Process-fairness audits for tabular classifiers";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);
  py::register_exception<DegenerateNeighborhoodError>(
      m, "DegenerateNeighborhoodError", PyExc_RuntimeError);

  py::class_<FeatureSpec>(m, "FeatureSpec")
      .def_readonly("name", &FeatureSpec::name)
      .def_property_readonly("kind", [](const FeatureSpec& f) {
        return f.kind == FeatureKind::categorical ? "categorical" : "numeric";
      });

  py::class_<Schema>(m, "Schema")
      .def_readonly("features", &Schema::features)
      .def_readonly("target", &Schema::target)
      .def_readonly("class_labels", &Schema::class_labels)
      .def("dimension", &Schema::dimension)
      .def("num_classes", &Schema::num_classes)
      .def("feature_index", &Schema::feature_index);

  py::class_<Dataset>(m, "Dataset")
      .def("__len__", &Dataset::size)
      .def_property_readonly("schema", &Dataset::schema)
      .def("dimension", &Dataset::dimension)
      .def("row",
           [](const Dataset& d, std::size_t i) {
             if (i >= d.size()) throw py::index_error();
             auto r = d.row(i);
             return std::vector<double>(r.begin(), r.end());
           })
      .def("label",
           [](const Dataset& d, std::size_t i) {
             if (i >= d.size()) throw py::index_error();
             return d.label(i);
           })
      .def("cell_text", &Dataset::cell_text)
      .def("class_counts", &Dataset::class_counts)
      .def("code_tables", &Dataset::code_tables);

  m.def("load_csv", [](const std::string& path, const std::string& target,
                       const std::map<std::string, std::string>& kinds) {
          return load_csv(path, target, make_kind_overrides(kinds));
        },
        py::arg("path"), py::arg("target"),
        py::arg("kinds") = std::map<std::string, std::string>{});
  m.def("write_csv", &write_csv, py::arg("data"), py::arg("path"));

  m.def("generate_planted_bias",
        [](std::size_t rows, int noise_features,
           const std::vector<double>& bias_strengths, double redundancy,
           std::uint64_t seed) {
          PlantedBiasOptions options;
          options.rows = rows;
          options.noise_features = noise_features;
          options.bias_strengths = bias_strengths;
          options.redundancy = redundancy;
          options.seed = seed;
          return generate_planted_bias(options);
        },
        py::arg("rows") = 1000, py::arg("noise_features") = 5,
        py::arg("bias_strengths") = std::vector<double>{1.0},
        py::arg("redundancy") = 0.0, py::arg("seed") = 0);

  py::class_<SplitPair>(m, "SplitPair")
      .def_readonly("train", &SplitPair::train)
      .def_readonly("test", &SplitPair::test)
      .def_readonly("train_indices", &SplitPair::train_indices)
      .def_readonly("test_indices", &SplitPair::test_indices);
  m.def("split_train_test", &split_train_test, py::arg("data"),
        py::arg("fraction") = 0.7, py::arg("seed") = 0);

  py::class_<FeatureStats>(m, "FeatureStats");
  m.def("compute_stats", &compute_stats, py::arg("data"), py::arg("bins") = 4);

  py::class_<TrainedModel>(m, "TrainedModel")
      .def_property_readonly("schema", &TrainedModel::schema)
      .def_property_readonly(
          "algorithm",
          [](const TrainedModel& model) {
            return std::string(algorithm_name(model.spec().algorithm));
          })
      .def_property_readonly(
          "mask",
          [](const TrainedModel& model) {
            return std::vector<std::string>(model.mask().dropped.begin(),
                                            model.mask().dropped.end());
          })
      .def("predict_proba",
           [](const TrainedModel& model, const std::vector<double>& row) {
             return model.predict_proba(row);
           })
      .def("predict", [](const TrainedModel& model,
                         const std::vector<double>& row) {
        return model.predict(row);
      });

  m.def("train",
        [](const std::string& algorithm,
           const std::map<std::string, double>& hyper, std::uint64_t seed,
           const Dataset& data, const std::vector<std::string>& mask) {
          return train(make_spec(algorithm, hyper, seed), data,
                       make_mask(mask));
        },
        py::arg("algorithm"), py::arg("hyper"), py::arg("seed"),
        py::arg("data"), py::arg("mask") = std::vector<std::string>{});
  m.def("accuracy",
        [](const TrainedModel& model, const Dataset& data) {
          return accuracy(model, data);
        },
        py::arg("model"), py::arg("data"));
  m.def("algorithms", []() {
    std::vector<std::string> names;
    for (Algorithm a : all_algorithms()) names.emplace_back(algorithm_name(a));
    return names;
  });

  m.def("serialize_model", &serialize_model, py::arg("model"));
  m.def("parse_model", &parse_model, py::arg("text"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
  m.def("load_model", &load_model, py::arg("path"));

  py::class_<Explanation>(m, "Explanation")
      .def_readonly("instance", &Explanation::instance)
      .def_readonly("explained_class", &Explanation::explained_class)
      .def_readonly("explained_label", &Explanation::explained_label)
      .def_readonly("predicted_probability",
                    &Explanation::predicted_probability)
      .def_readonly("contributions", &Explanation::contributions)
      .def_readonly("intercept", &Explanation::intercept)
      .def_readonly("local_r2", &Explanation::local_r2)
      .def_readonly("sigma", &Explanation::sigma);

  m.def("explain_instance",
        [](const TrainedModel& model, const std::vector<double>& row,
           const FeatureStats& stats, int n_samples, double lambda, int top_k,
           std::uint64_t seed, double sigma, std::optional<int> explained_class) {
          return explain_instance(model, row, stats,
                                  make_surrogate(n_samples, lambda, top_k, seed),
                                  KernelConfig{sigma}, explained_class);
        },
        py::arg("model"), py::arg("row"), py::arg("stats"),
        py::arg("n_samples") = 5000, py::arg("lambda") = 1e-3,
        py::arg("top_k") = 10, py::arg("seed") = 0, py::arg("sigma") = 0.0,
        py::arg("explained_class") = std::nullopt);
  m.def("render_explanation_text", &render_explanation_text,
        py::arg("explanation"), py::arg("instance_index") = 0,
        py::arg("bar_width") = 24);
  m.def("render_explanation_json", &render_explanation_json,
        py::arg("explanation"), py::arg("instance_index") = 0);

  py::class_<GlobalFeature>(m, "GlobalFeature")
      .def_readonly("feature", &GlobalFeature::feature)
      .def_readonly("mean_signed", &GlobalFeature::mean_signed)
      .def_readonly("mean_abs", &GlobalFeature::mean_abs)
      .def_readonly("stderr_signed", &GlobalFeature::stderr_signed);
  py::class_<GlobalExplanation>(m, "GlobalExplanation")
      .def_readonly("ranked", &GlobalExplanation::ranked)
      .def_readonly("picked", &GlobalExplanation::picked)
      .def_readonly("budget", &GlobalExplanation::budget);

  m.def("global_explanation",
        [](const TrainedModel& model, const Dataset& candidates,
           const FeatureStats& stats, int n_samples, double lambda, int top_k,
           std::uint64_t seed, double sigma, int budget) {
          return global_explanation(model, candidates, stats,
                                    make_surrogate(n_samples, lambda, top_k,
                                                   seed),
                                    KernelConfig{sigma}, budget);
        },
        py::arg("model"), py::arg("candidates"), py::arg("stats"),
        py::arg("n_samples") = 5000, py::arg("lambda") = 1e-3,
        py::arg("top_k") = 10, py::arg("seed") = 0, py::arg("sigma") = 0.0,
        py::arg("budget") = 15);

  py::class_<Offender>(m, "Offender")
      .def_readonly("feature", &Offender::feature)
      .def_readonly("rank", &Offender::rank)
      .def_readonly("mean_signed", &Offender::mean_signed)
      .def_readonly("mean_abs", &Offender::mean_abs)
      .def_readonly("threshold", &Offender::threshold);
  py::class_<FairnessVerdict>(m, "FairnessVerdict")
      .def_readonly("fair", &FairnessVerdict::fair)
      .def_readonly("offenders", &FairnessVerdict::offenders)
      .def_readonly("top_k", &FairnessVerdict::top_k);

  m.def("assess_fairness",
        [](const GlobalExplanation& global,
           const std::vector<std::string>& sensitive, int top_k) {
          return assess_fairness(global, make_sensitive(sensitive), top_k);
        },
        py::arg("global_explanation"), py::arg("sensitive"),
        py::arg("top_k") = 10);

  m.def("build_pool",
        [](const std::string& algorithm,
           const std::map<std::string, double>& hyper, std::uint64_t seed,
           const Dataset& training, const std::vector<std::string>& sensitive) {
          return build_pool(make_spec(algorithm, hyper, seed), training,
                            make_sensitive(sensitive))
              .members;
        },
        py::arg("algorithm"), py::arg("hyper"), py::arg("seed"),
        py::arg("training"), py::arg("sensitive"));

  py::class_<EnsembleModel>(m, "EnsembleModel")
      .def(py::init<std::vector<TrainedModel>>(), py::arg("members"))
      .def_property_readonly("schema", &EnsembleModel::schema)
      .def_property_readonly("members", &EnsembleModel::members)
      .def("predict_proba",
           [](const EnsembleModel& model, const std::vector<double>& row) {
             return model.predict_proba(row);
           })
      .def("predict", [](const EnsembleModel& model,
                         const std::vector<double>& row) {
        return model.predict(row);
      });
  m.def("ensemble_accuracy",
        [](const EnsembleModel& model, const Dataset& data) {
          return accuracy(model, data);
        },
        py::arg("model"), py::arg("data"));

  py::class_<AlgorithmAudit>(m, "AlgorithmAudit")
      .def_property_readonly(
          "algorithm",
          [](const AlgorithmAudit& a) {
            return std::string(algorithm_name(a.spec.algorithm));
          })
      .def_readonly("original_accuracy", &AlgorithmAudit::original_accuracy)
      .def_readonly("original_global", &AlgorithmAudit::original_global)
      .def_readonly("original_verdict", &AlgorithmAudit::original_verdict)
      .def_readonly("ensemble_built", &AlgorithmAudit::ensemble_built)
      .def_readonly("ensemble_accuracy", &AlgorithmAudit::ensemble_accuracy)
      .def_readonly("ensemble_global", &AlgorithmAudit::ensemble_global)
      .def_readonly("ensemble_verdict", &AlgorithmAudit::ensemble_verdict);

  py::class_<AuditReport>(m, "AuditReport")
      .def_readonly("rows", &AuditReport::rows)
      .def_readonly("train_rows", &AuditReport::train_rows)
      .def_readonly("test_rows", &AuditReport::test_rows)
      .def_readonly("candidate_count", &AuditReport::candidate_count)
      .def_readonly("algorithms", &AuditReport::algorithms)
      .def_readonly("stage_seeds", &AuditReport::stage_seeds);

  py::class_<AuditOutcome>(m, "AuditOutcome")
      .def_readonly("summary", &AuditOutcome::summary)
      .def_readonly("original", &AuditOutcome::original)
      .def_readonly("pool_members", &AuditOutcome::pool_members);

  py::class_<AuditRun>(m, "AuditRun")
      .def_readonly("report", &AuditRun::report)
      .def_readonly("outcomes", &AuditRun::outcomes);

  m.def("run_audit",
        [](const std::string& algorithm,
           const std::map<std::string, double>& hyper,
           const Dataset& data, const std::vector<std::string>& sensitive,
           std::uint64_t seed, double split_fraction, int bins,
           int candidate_limit, int budget, int fairness_top_k, int n_samples,
           double lambda, int top_k, std::optional<double> sigma) {
          AuditSettings settings;
          settings.split_fraction = split_fraction;
          settings.bins = bins;
          settings.candidate_limit = candidate_limit;
          settings.budget = budget;
          settings.fairness_top_k = fairness_top_k;
          settings.surrogate =
              make_surrogate(n_samples, lambda, top_k, 0);
          settings.sigma = sigma;
          ClassifierSpec spec =
              make_spec(algorithm, hyper, derive_seed(seed, seed_stream::kTrain, 0));
          return run_audit(spec, data, make_sensitive(sensitive), settings,
                           seed);
        },
        py::arg("algorithm"), py::arg("hyper"), py::arg("data"),
        py::arg("sensitive"), py::arg("seed"),
        py::arg("split_fraction") = 0.7, py::arg("bins") = 4,
        py::arg("candidate_limit") = 200, py::arg("budget") = 15,
        py::arg("fairness_top_k") = 10, py::arg("n_samples") = 5000,
        py::arg("lambda") = 1e-3, py::arg("top_k") = 10,
        py::arg("sigma") = std::nullopt);

  m.def("run_audits",
        [](const std::vector<std::string>& algorithms, const Dataset& data,
           const std::vector<std::string>& sensitive, std::uint64_t seed,
           double split_fraction, int bins, int candidate_limit, int budget,
           int fairness_top_k, int n_samples, double lambda, int top_k,
           std::optional<double> sigma) {
          AuditSettings settings;
          settings.split_fraction = split_fraction;
          settings.bins = bins;
          settings.candidate_limit = candidate_limit;
          settings.budget = budget;
          settings.fairness_top_k = fairness_top_k;
          settings.surrogate = make_surrogate(n_samples, lambda, top_k, 0);
          settings.sigma = sigma;
          std::vector<ClassifierSpec> specs;
          for (std::size_t i = 0; i < algorithms.size(); ++i)
            specs.push_back(make_spec(
                algorithms[i], {}, derive_seed(seed, seed_stream::kTrain, i)));
          return run_audits(specs, data, make_sensitive(sensitive), settings,
                            seed);
        },
        py::arg("algorithms"), py::arg("data"), py::arg("sensitive"),
        py::arg("seed"), py::arg("split_fraction") = 0.7, py::arg("bins") = 4,
        py::arg("candidate_limit") = 200, py::arg("budget") = 15,
        py::arg("fairness_top_k") = 10, py::arg("n_samples") = 5000,
        py::arg("lambda") = 1e-3, py::arg("top_k") = 10,
        py::arg("sigma") = std::nullopt);

  m.def("render_report_markdown", &render_report_markdown, py::arg("report"));
  m.def("render_report_json", &render_report_json, py::arg("report"));
}
