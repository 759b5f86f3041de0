#include "limeout/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "limeout/errors.hpp"
#include "limeout/rng.hpp"

namespace limeout {

void SensitiveSet::validate(const Schema& schema) const {
  if (features.empty())
    throw ConfigError("sensitive feature set is empty");
  std::vector<std::string> sorted = features;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("sensitive feature listed twice");
  for (const auto& name : features)
    if (schema.feature_index(name) < 0)
      throw ConfigError("sensitive feature not in the data: " + name);
}

bool SensitiveSet::contains(const std::string& name) const {
  return std::find(features.begin(), features.end(), name) != features.end();
}

FairnessVerdict assess_fairness(const GlobalExplanation& global,
                                const SensitiveSet& sensitive, int top_k) {
  if (global.ranked.empty())
    throw std::invalid_argument("empty global explanation");
  if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");

  FairnessVerdict verdict;
  verdict.top_k = top_k;
  // Inclusive cutoff: matching the K-th magnitude counts as being inside.
  double cutoff = static_cast<std::size_t>(top_k) <= global.ranked.size()
                      ? global.ranked[top_k - 1].mean_abs
                      : -1.0;
  for (std::size_t r = 0; r < global.ranked.size(); ++r) {
    const GlobalFeature& feature = global.ranked[r];
    if (!sensitive.contains(feature.feature)) continue;
    if (feature.mean_abs < cutoff) continue;
    double tau = 3.0 * feature.stderr_signed;
    if (feature.mean_abs <= 0.0 || feature.mean_abs < tau) continue;
    verdict.offenders.push_back({feature.feature, static_cast<int>(r) + 1,
                                 feature.mean_signed, feature.mean_abs, tau});
  }
  verdict.fair = verdict.offenders.empty();
  return verdict;
}

ClassifierPool build_pool(const ClassifierSpec& spec, const Dataset& training,
                          const SensitiveSet& sensitive) {
  sensitive.validate(training.schema());
  FeatureMask drop_all;
  for (const auto& name : sensitive.features) drop_all.dropped.insert(name);
  drop_all.validate(training.schema());  // dropping all must leave a feature

  ClassifierPool pool;
  for (std::size_t k = 0; k < sensitive.features.size(); ++k) {
    ClassifierSpec member = spec;
    member.seed = derive_seed(spec.seed, seed_stream::kPoolMember, k);
    FeatureMask mask;
    mask.dropped.insert(sensitive.features[k]);
    pool.members.push_back(train(member, training, mask));
  }
  ClassifierSpec last = spec;
  last.seed = derive_seed(spec.seed, seed_stream::kPoolMember,
                          sensitive.features.size());
  pool.members.push_back(train(last, training, drop_all));
  return pool;
}

EnsembleModel::EnsembleModel(std::vector<TrainedModel> members)
    : members_(std::move(members)) {
  if (members_.empty())
    throw std::invalid_argument("ensemble needs at least one member");
  for (const TrainedModel& member : members_)
    if (!(member.schema() == members_[0].schema()))
      throw std::invalid_argument("ensemble members disagree on the schema");
}

const Schema& EnsembleModel::schema() const { return members_[0].schema(); }

std::vector<double> EnsembleModel::predict_proba(
    std::span<const double> row) const {
  std::vector<double> proba(schema().num_classes(), 0.0);
  for (const TrainedModel& member : members_) {
    std::vector<double> p = member.predict_proba(row);
    for (std::size_t k = 0; k < proba.size(); ++k) proba[k] += p[k];
  }
  for (double& p : proba) p /= static_cast<double>(members_.size());
  return proba;
}

namespace {

void validate_settings(const AuditSettings& settings) {
  if (!(settings.split_fraction > 0.0 && settings.split_fraction < 1.0))
    throw std::invalid_argument("split fraction must lie strictly in (0, 1)");
  if (settings.bins < 2) throw std::invalid_argument("bins must be at least 2");
  if (settings.candidate_limit < 1)
    throw std::invalid_argument("candidate limit must be at least 1");
  if (settings.budget < 1)
    throw std::invalid_argument("budget must be at least 1");
  if (settings.fairness_top_k < 1)
    throw std::invalid_argument("fairness top-k must be at least 1");
  if (settings.sigma.has_value() && !(*settings.sigma > 0.0))
    throw std::invalid_argument("sigma must be positive");
}

Dataset select_candidates(const Dataset& test, int limit,
                          std::uint64_t seed) {
  if (test.size() <= static_cast<std::size_t>(limit)) {
    std::vector<std::size_t> all(test.size());
    std::iota(all.begin(), all.end(), 0);
    return test.subset(all);
  }
  SeededRng rng(seed);
  std::vector<std::size_t> pool(test.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(limit); ++i) {
    std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(limit);
  std::sort(pool.begin(), pool.end());
  return test.subset(pool);
}

}  // namespace

AuditOutcome run_audit(const ClassifierSpec& spec, const Dataset& data,
                       const SensitiveSet& sensitive,
                       const AuditSettings& settings,
                       std::uint64_t audit_seed) {
  validate_settings(settings);
  sensitive.validate(data.schema());

  SplitPair split = split_train_test(
      data, settings.split_fraction,
      derive_seed(audit_seed, seed_stream::kSplit));
  FeatureStats stats = compute_stats(split.train, settings.bins);
  Dataset candidates =
      select_candidates(split.test, settings.candidate_limit,
                        derive_seed(audit_seed, seed_stream::kCandidates));

  KernelConfig kernel;
  if (settings.sigma.has_value()) kernel.sigma = *settings.sigma;

  AuditOutcome outcome{{}, train(spec, split.train), {}};
  outcome.summary.spec = spec;
  outcome.summary.original_accuracy = accuracy(outcome.original, split.test);

  SurrogateConfig surrogate = settings.surrogate;
  surrogate.seed = derive_seed(audit_seed, seed_stream::kExplainOriginal);
  outcome.summary.original_global =
      global_explanation(outcome.original, candidates, stats, surrogate,
                         kernel, settings.budget);
  outcome.summary.original_verdict = assess_fairness(
      outcome.summary.original_global, sensitive, settings.fairness_top_k);

  if (!outcome.summary.original_verdict.fair) {
    ClassifierPool pool = build_pool(spec, split.train, sensitive);
    outcome.pool_members = pool.members;
    EnsembleModel ensemble(std::move(pool.members));
    outcome.summary.ensemble_built = true;
    outcome.summary.ensemble_accuracy = accuracy(ensemble, split.test);
    SurrogateConfig ensemble_surrogate = settings.surrogate;
    ensemble_surrogate.seed =
        derive_seed(audit_seed, seed_stream::kExplainEnsemble);
    outcome.summary.ensemble_global = global_explanation(
        ensemble, candidates, stats, ensemble_surrogate, kernel,
        settings.budget);
    outcome.summary.ensemble_verdict = assess_fairness(
        outcome.summary.ensemble_global, sensitive, settings.fairness_top_k);
  }
  return outcome;
}

AuditRun run_audits(const std::vector<ClassifierSpec>& specs,
                    const Dataset& data, const SensitiveSet& sensitive,
                    const AuditSettings& settings, std::uint64_t audit_seed) {
  if (specs.empty()) throw std::invalid_argument("no algorithms to audit");
  validate_settings(settings);
  sensitive.validate(data.schema());

  AuditRun run;
  run.report.rows = data.size();
  run.report.schema = data.schema();
  run.report.sensitive = sensitive;
  run.report.settings = settings;
  run.report.seed = audit_seed;

  SplitPair split = split_train_test(
      data, settings.split_fraction,
      derive_seed(audit_seed, seed_stream::kSplit));
  run.report.train_rows = split.train.size();
  run.report.test_rows = split.test.size();
  run.report.candidate_count =
      std::min<std::size_t>(split.test.size(),
                            static_cast<std::size_t>(settings.candidate_limit));

  run.report.stage_seeds.emplace_back(
      "split", derive_seed(audit_seed, seed_stream::kSplit));
  run.report.stage_seeds.emplace_back(
      "candidates", derive_seed(audit_seed, seed_stream::kCandidates));
  run.report.stage_seeds.emplace_back(
      "explain_original", derive_seed(audit_seed, seed_stream::kExplainOriginal));
  run.report.stage_seeds.emplace_back(
      "explain_ensemble", derive_seed(audit_seed, seed_stream::kExplainEnsemble));
  for (const ClassifierSpec& spec : specs)
    run.report.stage_seeds.emplace_back(
        "train_" + std::string(algorithm_name(spec.algorithm)), spec.seed);

  for (const ClassifierSpec& spec : specs) {
    AuditOutcome outcome =
        run_audit(spec, data, sensitive, settings, audit_seed);
    run.report.algorithms.push_back(outcome.summary);
    run.outcomes.push_back(std::move(outcome));
  }
  return run;
}

}  // namespace limeout
