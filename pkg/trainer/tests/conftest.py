import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trainer_fixtures import PHI_NBG, UNIT_NBG, run_cli


@pytest.fixture
def phi_nbg_text() -> str:
    return PHI_NBG


@pytest.fixture
def unit_nbg_text() -> str:
    return UNIT_NBG


def _build_corpus(root, name, specs, timeout="10"):
    """Generate and label corpora with the solver toolkit's CLI; collect graphs."""
    data_dir = root / name
    data_dir.mkdir()
    for i, (n, m, count, seed) in enumerate(specs):
        corpus = root / f"{name}-corpus-{i}"
        out = root / f"{name}-built-{i}"
        run_cli(
            "nbsat", "dataset", "gen", "--kind", "ksat",
            "--n", str(n), "--m", str(m), "--k", "3",
            "--seed", str(seed), "--count", str(count), "-o", str(corpus),
        )
        run_cli(
            "nbsat", "dataset", "build", str(corpus),
            "--timeout", timeout, "--split", "pretrain",
            "-o", str(out), "--workers", "4",
        )
        for graph in sorted(out.glob("*.nbg")):
            shutil.copy(graph, data_dir / f"{name}{i}-{graph.name}")
    return data_dir


@pytest.fixture(scope="session")
def coloring_data(tmp_path_factory):
    """Structured-domain graphs (graph coloring): a train and a held-out split."""
    root = tmp_path_factory.mktemp("nbtrain-color")
    splits = {}
    for name, count, seed in (("train", 40, 100), ("heldout", 20, 900)):
        corpus = root / f"{name}-corpus"
        out = root / f"{name}-built"
        run_cli(
            "nbsat", "dataset", "gen", "--kind", "color", "--n", "7", "--colors", "3",
            "--edge-prob", "0.35", "--seed", str(seed), "--count", str(count),
            "-o", str(corpus),
        )
        run_cli(
            "nbsat", "dataset", "build", str(corpus), "--timeout", "10",
            "--split", "finetune", "-o", str(out), "--workers", "4",
        )
        data_dir = root / name
        data_dir.mkdir()
        for graph in sorted(out.glob("*.nbg")):
            shutil.copy(graph, data_dir / graph.name)
        splits[name] = data_dir
    return splits


@pytest.fixture(scope="session")
def train_data(tmp_path_factory):
    """Dual-augmented labeled training graphs from three size bands."""
    root = tmp_path_factory.mktemp("nbtrain-train")
    return _build_corpus(
        root,
        "train",
        [(10, 42, 100, 1000), (12, 50, 100, 2000), (14, 59, 100, 3000)],
    )


@pytest.fixture(scope="session")
def eval_data(tmp_path_factory):
    """Held-out dual-augmented graphs, disjoint seeds from the training set."""
    root = tmp_path_factory.mktemp("nbtrain-eval")
    return _build_corpus(root, "eval", [(11, 46, 40, 9000), (13, 55, 40, 9500)])


@pytest.fixture(scope="session")
def overfit_data(tmp_path_factory, train_data):
    """Fixed 50-graph slice of the training corpus, for overfit checks."""
    root = tmp_path_factory.mktemp("nbtrain-overfit")
    data_dir = root / "data"
    data_dir.mkdir()
    for graph in sorted(train_data.glob("*.nbg"))[:50]:
        shutil.copy(graph, data_dir / graph.name)
    return data_dir
