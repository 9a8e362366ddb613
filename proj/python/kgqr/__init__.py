"""Knowledge-graph enhanced Q-learning for interactive recommendation."""

from ._kgqr import (
    Config,
    ConfigError,
    Dataset,
    DimensionError,
    Graph,
    NumericError,
    ParseError,
    StateError,
    average_reward,
    compare_runs,
    config_keys,
    double_q_target,
    evaluate_random,
    ingest,
    ingest_text,
    interactions_to_threshold,
    precision_at_T,
    recall_at_T,
    run_seed,
    synth,
    wilcoxon,
    write_synth,
)

__all__ = [
    "Config",
    "ConfigError",
    "Dataset",
    "DimensionError",
    "Graph",
    "NumericError",
    "ParseError",
    "StateError",
    "average_reward",
    "compare_runs",
    "config_keys",
    "double_q_target",
    "evaluate_random",
    "ingest",
    "ingest_text",
    "interactions_to_threshold",
    "precision_at_T",
    "recall_at_T",
    "run_seed",
    "synth",
    "wilcoxon",
    "write_synth",
]
