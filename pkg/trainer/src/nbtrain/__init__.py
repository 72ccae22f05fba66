"""Graph network for backbone phase prediction over NBG graphs."""

__version__ = "0.1.0"

from .graphio import GraphData, load_graph_file, merge_graphs, parse_nbg, write_hints
from .model import BackboneNet, ModelConfig, phase_and_confidence
from .training import (
    MetricsReport,
    TrainConfig,
    evaluate_metrics,
    fine_tune,
    labeled_accuracy,
    load_checkpoint,
    load_dataset,
    masked_bce,
    metrics_from_counts,
    predict_file,
    predict_graph,
    save_checkpoint,
    train,
    train_model,
)

__all__ = [
    "BackboneNet",
    "GraphData",
    "MetricsReport",
    "ModelConfig",
    "TrainConfig",
    "evaluate_metrics",
    "fine_tune",
    "labeled_accuracy",
    "load_checkpoint",
    "load_dataset",
    "load_graph_file",
    "masked_bce",
    "merge_graphs",
    "metrics_from_counts",
    "parse_nbg",
    "phase_and_confidence",
    "predict_file",
    "predict_graph",
    "save_checkpoint",
    "train",
    "train_model",
    "write_hints",
]
