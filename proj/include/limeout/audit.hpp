#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "limeout/classifier.hpp"
#include "limeout/global_explanation.hpp"
#include "limeout/split.hpp"

namespace limeout {

// The features whose influence on decisions is considered unacceptable.
struct SensitiveSet {
  std::vector<std::string> features;

  // Throws ConfigError when empty, duplicated, or naming a column that is
  // not in the schema.
  void validate(const Schema& schema) const;
  bool contains(const std::string& name) const;
};

struct Offender {
  std::string feature;
  int rank = 0;              // 1-based rank by mean absolute contribution
  double mean_signed = 0.0;
  double mean_abs = 0.0;
  double threshold = 0.0;    // noise floor this feature had to clear
};

struct FairnessVerdict {
  bool fair = true;
  std::vector<Offender> offenders;
  int top_k = 10;
};

// A sensitive feature offends when it ranks within the top K (a tie with
// the K-th magnitude counts) AND its mean absolute contribution clears its
// own noise floor tau_j = 3 * SE_j, where SE_j is the standard error of
// the feature's signed contributions across the picked explanations.  The
// floor keeps features whose contributions are statistically
// indistinguishable from estimation noise from being flagged merely
// because the feature universe is small.  Fair iff no sensitive feature
// offends.
FairnessVerdict assess_fairness(const GlobalExplanation& global,
                                const SensitiveSet& sensitive, int top_k = 10);

// Dropout pool: one model per single sensitive feature dropped, plus one
// with every sensitive feature dropped.  Member k trains with seed
// derive_seed(spec.seed, kPoolMember, k).
struct ClassifierPool {
  std::vector<TrainedModel> members;
};

ClassifierPool build_pool(const ClassifierSpec& spec, const Dataset& train,
                          const SensitiveSet& sensitive);

// Uniform soft-vote over the pool: the arithmetic mean of every member's
// class probabilities.
class EnsembleModel final : public Classifier {
 public:
  explicit EnsembleModel(std::vector<TrainedModel> members);

  const Schema& schema() const override;
  std::vector<double> predict_proba(std::span<const double> row) const override;

  const std::vector<TrainedModel>& members() const { return members_; }

 private:
  std::vector<TrainedModel> members_;
};

struct AuditSettings {
  double split_fraction = 0.7;
  int bins = 4;
  int candidate_limit = 200;  // explanation candidates drawn from the test split
  int budget = 15;            // submodular pick budget
  int fairness_top_k = 10;
  SurrogateConfig surrogate;  // seed field is ignored; stage seeds are derived
  std::optional<double> sigma;
};

// Everything the audit learned about one algorithm.
struct AlgorithmAudit {
  ClassifierSpec spec;
  double original_accuracy = 0.0;
  GlobalExplanation original_global;
  FairnessVerdict original_verdict;
  bool ensemble_built = false;
  double ensemble_accuracy = 0.0;
  GlobalExplanation ensemble_global;
  FairnessVerdict ensemble_verdict;
};

struct AuditReport {
  std::size_t rows = 0;
  Schema schema;
  SensitiveSet sensitive;
  AuditSettings settings;
  std::uint64_t seed = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::size_t candidate_count = 0;
  std::vector<AlgorithmAudit> algorithms;
  // Derived per-stage seeds, echoed for replay.
  std::vector<std::pair<std::string, std::uint64_t>> stage_seeds;
  // Canonical config echo (filled by the CLI; empty for library callers).
  std::vector<std::pair<std::string, std::string>> config_echo;
};

// One algorithm's audit artifacts: the report entry plus the trained
// models backing it (kept out of AlgorithmAudit so reports serialize
// without them).
struct AuditOutcome {
  AlgorithmAudit summary;
  TrainedModel original;
  std::vector<TrainedModel> pool_members;  // empty when already fair
};

// Full pipeline for one algorithm: split, train, explain globally, assess;
// when the verdict is unfair, build the dropout pool, ensemble it, and
// explain/assess again.  The split, candidate selection, and explanation
// seeds derive from audit_seed, so every algorithm audited under one
// audit_seed sees the identical split and candidates.
AuditOutcome run_audit(const ClassifierSpec& spec, const Dataset& data,
                       const SensitiveSet& sensitive,
                       const AuditSettings& settings, std::uint64_t audit_seed);

// Audits several algorithms over the same derived split and assembles the
// report.
struct AuditRun {
  AuditReport report;
  std::vector<AuditOutcome> outcomes;  // parallel to report.algorithms
};

AuditRun run_audits(const std::vector<ClassifierSpec>& specs,
                    const Dataset& data, const SensitiveSet& sensitive,
                    const AuditSettings& settings, std::uint64_t audit_seed);

}  // namespace limeout
