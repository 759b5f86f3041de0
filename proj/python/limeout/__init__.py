"""Process-fairness audits for tabular classifiers.

Train black-box classifiers, explain them locally with weighted linear
surrogates, aggregate explanations globally over submodular-picked
instances, judge reliance on sensitive features, and repair unfair models
with a feature-dropout ensemble.
"""

from ._core import (
    AlgorithmAudit,
    AuditOutcome,
    AuditReport,
    AuditRun,
    ConfigError,
    DataError,
    Dataset,
    DegenerateNeighborhoodError,
    EnsembleModel,
    Explanation,
    FairnessVerdict,
    FeatureSpec,
    FeatureStats,
    GlobalExplanation,
    GlobalFeature,
    Offender,
    Schema,
    SplitPair,
    TrainedModel,
    TrainingError,
    __version__,
    accuracy,
    algorithms,
    assess_fairness,
    build_pool,
    compute_stats,
    ensemble_accuracy,
    explain_instance,
    generate_planted_bias,
    global_explanation,
    load_csv,
    load_model,
    parse_model,
    render_explanation_json,
    render_explanation_text,
    render_report_json,
    render_report_markdown,
    run_audit,
    run_audits,
    save_model,
    serialize_model,
    split_train_test,
    train,
    write_csv,
)

__all__ = [
    "AlgorithmAudit",
    "AuditOutcome",
    "AuditReport",
    "AuditRun",
    "ConfigError",
    "DataError",
    "Dataset",
    "DegenerateNeighborhoodError",
    "EnsembleModel",
    "Explanation",
    "FairnessVerdict",
    "FeatureSpec",
    "FeatureStats",
    "GlobalExplanation",
    "GlobalFeature",
    "Offender",
    "Schema",
    "SplitPair",
    "TrainedModel",
    "TrainingError",
    "__version__",
    "accuracy",
    "algorithms",
    "assess_fairness",
    "build_pool",
    "compute_stats",
    "ensemble_accuracy",
    "explain_instance",
    "generate_planted_bias",
    "global_explanation",
    "load_csv",
    "load_model",
    "parse_model",
    "render_explanation_json",
    "render_explanation_text",
    "render_report_json",
    "render_report_markdown",
    "run_audit",
    "run_audits",
    "save_model",
    "serialize_model",
    "split_train_test",
    "train",
    "write_csv",
]
