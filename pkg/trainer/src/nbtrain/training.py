"""Training, fine-tuning, prediction, and metric evaluation.

The loss is binary cross entropy computed only over labeled (backbone)
variable nodes: the dataset labels nothing else, so unlabeled node outputs
carry no training signal. Checkpoints are self-describing: a format tag, the
model configuration, and the parameter tensors.
"""

from __future__ import annotations

import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch import nn

from .graphio import GraphData, load_graph_file, merge_graphs, write_hints
from .model import BackboneNet, ModelConfig, phase_and_confidence

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "NBCK 1"


@dataclass
class TrainConfig:
    learning_rate: float = 1e-4
    epochs: int = 40  # fine-tuning runs typically use 60
    batch_size: int = 8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be nonnegative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class MetricsReport:
    precision: float
    recall: float
    f1: float
    accuracy: float
    tp: int
    fp: int
    fn: int
    tn: int


def load_dataset(data_dir: str | Path) -> list[GraphData]:
    paths = sorted(Path(data_dir).glob("*.nbg"))
    if not paths:
        raise ValueError(f"no .nbg graphs under {data_dir}")
    return [load_graph_file(p) for p in paths]


def masked_bce(logits: torch.Tensor, graph: GraphData) -> torch.Tensor:
    """Summed BCE over labeled nodes only (callers normalize by label count)."""
    picked = logits[graph.label_nodes]
    targets = graph.label_phases.to(picked.dtype)
    return nn.functional.binary_cross_entropy_with_logits(picked, targets, reduction="sum")


def train_model(
    graphs: list[GraphData],
    model_config: ModelConfig,
    train_config: TrainConfig,
    initial_state: dict | None = None,
) -> tuple[BackboneNet, list[float]]:
    """Optimize on labeled graphs; returns the model and per-epoch mean loss."""
    total_labels = sum(g.num_labels for g in graphs)
    if total_labels == 0:
        raise ValueError("dataset contains no labeled variable nodes")

    torch.manual_seed(train_config.seed)
    model = BackboneNet(model_config)
    if initial_state is not None:
        model.load_state_dict(initial_state)
    optimizer = torch.optim.AdamW(model.parameters(), lr=train_config.learning_rate)
    rng = random.Random(train_config.seed)

    history: list[float] = []
    order = list(range(len(graphs)))
    for epoch in range(train_config.epochs):
        rng.shuffle(order)
        model.train()
        epoch_loss = 0.0
        for start in range(0, len(order), train_config.batch_size):
            batch = merge_graphs([graphs[i] for i in order[start : start + train_config.batch_size]])
            if batch.num_labels == 0:
                continue
            optimizer.zero_grad()
            loss = masked_bce(model(batch), batch) / batch.num_labels
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach()) * batch.num_labels
        mean_loss = epoch_loss / total_labels
        history.append(mean_loss)
        logger.info("epoch %d/%d loss %.6f", epoch + 1, train_config.epochs, mean_loss)
    return model, history


def save_checkpoint(model: BackboneNet, path: str | Path) -> None:
    payload = {
        "format": CHECKPOINT_FORMAT,
        "config": asdict(model.config),
        "state": model.state_dict(),
    }
    torch.save(payload, path)


def load_checkpoint(path: str | Path) -> BackboneNet:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a {CHECKPOINT_FORMAT} checkpoint: {path}")
    config = ModelConfig(**payload["config"])
    model = BackboneNet(config)
    try:
        model.load_state_dict(payload["state"])
    except RuntimeError as exc:
        raise ValueError(f"checkpoint parameters do not match its config: {exc}") from exc
    model.eval()
    return model


def train(
    data_dir: str | Path,
    model_config: ModelConfig,
    train_config: TrainConfig,
    out_path: str | Path,
) -> list[float]:
    graphs = load_dataset(data_dir)
    model, history = train_model(graphs, model_config, train_config)
    save_checkpoint(model, out_path)
    return history


def fine_tune(
    checkpoint_path: str | Path,
    data_dir: str | Path,
    train_config: TrainConfig,
    out_path: str | Path,
) -> list[float]:
    """Continue optimization from a checkpoint on a domain-specific dataset."""
    model = load_checkpoint(checkpoint_path)
    graphs = load_dataset(data_dir)
    refined, history = train_model(
        graphs, model.config, train_config, initial_state=model.state_dict()
    )
    save_checkpoint(refined, out_path)
    return history


def predict_graph(model: BackboneNet, graph: GraphData):
    """Hints for every variable of the formula, in ascending variable order."""
    probs = model.variable_probs(graph)
    phases, confidences = [], []
    for prob in probs.tolist():
        phase, confidence = phase_and_confidence(prob)
        phases.append(phase)
        confidences.append(confidence)
    return graph.var_ids, phases, confidences


def predict_file(
    checkpoint_path: str | Path, graph_path: str | Path, out_path: str | Path
) -> None:
    model = load_checkpoint(checkpoint_path)
    var_ids, phases, confidences = predict_graph(model, load_graph_file(graph_path))
    write_hints(out_path, var_ids, phases, confidences)


def metrics_from_counts(tp: int, fp: int, fn: int, tn: int) -> MetricsReport:
    """Confusion counts to the usual rates; undefined ratios report 0.0."""
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total if total else 0.0
    return MetricsReport(precision, recall, f1, accuracy, tp, fp, fn, tn)


def confusion_over_graphs(predict_phases, graphs: list[GraphData]) -> tuple[int, int, int, int]:
    """Pooled confusion over labeled nodes; positive class is phase 1.

    ``predict_phases(graph)`` returns one 0/1 phase per variable node.
    """
    tp = fp = fn = tn = 0
    for graph in graphs:
        phases = predict_phases(graph)
        node_pos = {int(nid): i for i, nid in enumerate(graph.var_nodes.tolist())}
        for nid, target in zip(graph.label_nodes.tolist(), graph.label_phases.tolist()):
            predicted = phases[node_pos[int(nid)]]
            if target == 1.0:
                tp += predicted == 1
                fn += predicted == 0
            else:
                fp += predicted == 1
                tn += predicted == 0
    return tp, fp, fn, tn


def evaluate_metrics(checkpoint_path: str | Path, data_dir: str | Path) -> MetricsReport:
    model = load_checkpoint(checkpoint_path)
    graphs = load_dataset(data_dir)
    if sum(g.num_labels for g in graphs) == 0:
        raise ValueError("dataset contains no labeled variable nodes")

    def predict_phases(graph: GraphData) -> list[int]:
        return [phase_and_confidence(p)[0] for p in model.variable_probs(graph).tolist()]

    return metrics_from_counts(*confusion_over_graphs(predict_phases, graphs))


def labeled_accuracy(model: BackboneNet, graphs: list[GraphData]) -> float:
    """Fraction of labeled nodes whose predicted phase matches the label."""

    def predict_phases(graph: GraphData) -> list[int]:
        return [phase_and_confidence(p)[0] for p in model.variable_probs(graph).tolist()]

    tp, fp, fn, tn = confusion_over_graphs(predict_phases, graphs)
    return (tp + tn) / (tp + fp + fn + tn)
