"""Corpus construction: label formulas with exact backbones, filter, augment.

For every DIMACS file in a corpus directory the builder extracts the backbone
under a timeout, keeps only formulas solved in time with at least one backbone
variable, then writes two labeled graphs per accepted formula: the original
and its polarity-flipped dual. The dual carries the negated labels, so the
finished dataset is exactly balanced between positive and negative phases.

The manifest (NBM 1) records one line per source file:
``r <source> <status> <num_vars> <num_clauses> <num_backbone> <pos_orig>
<pos_dual> <graph_orig> <graph_dual>`` with ``-`` for absent graph paths.
Graph paths are relative to the manifest's directory.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .backbone import BackboneStatus, extract_backbone
from .cnf import CnfFormula, dual_formula, read_dimacs, save_dimacs
from .graph import encode, save_graph

ACCEPTED = "ACCEPTED"
REJECT_REASONS = ("UNSAT_INPUT", "TIMEOUT", "ZERO_BACKBONE", "READ_ERROR")
SPLITS = ("pretrain", "finetune")


@dataclass
class ManifestEntry:
    source: str
    status: str  # ACCEPTED or a rejection reason
    num_vars: int
    num_clauses: int
    num_backbone: int
    pos_orig: int
    pos_dual: int
    graph_original: str | None
    graph_dual: str | None

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPTED


@dataclass
class DatasetManifest:
    split: str
    timeout: float
    entries: list[ManifestEntry]


@dataclass
class DatasetStats:
    accepted_formulas: int
    graph_count: int
    mean_vars: float
    mean_clauses: float
    mean_backbone: float
    backbone_proportion: float
    label_balance: float


def _process_file(args: tuple[str, str, float]) -> ManifestEntry:
    source, out_dir, timeout = args
    path = Path(source)
    try:
        formula = read_dimacs(path)
    except Exception:
        return ManifestEntry(source, "READ_ERROR", 0, 0, 0, 0, 0, None, None)

    result = extract_backbone(formula, timeout=timeout)
    nv, nc = formula.num_vars, len(formula.clauses)
    if result.status is BackboneStatus.UNSAT_INPUT:
        return ManifestEntry(source, "UNSAT_INPUT", nv, nc, 0, 0, 0, None, None)
    if result.status is BackboneStatus.TIMEOUT:
        return ManifestEntry(source, "TIMEOUT", nv, nc, 0, 0, 0, None, None)
    labels = result.labeling or {}
    if not labels:
        return ManifestEntry(source, "ZERO_BACKBONE", nv, nc, 0, 0, 0, None, None)

    dual, dual_labels = dual_formula(formula, labels)
    orig_name = f"{path.stem}.nbg"
    dual_name = f"{path.stem}.dual.nbg"
    save_graph(encode(formula), Path(out_dir) / orig_name, labels)
    save_graph(encode(dual), Path(out_dir) / dual_name, dual_labels)
    return ManifestEntry(
        source,
        ACCEPTED,
        nv,
        nc,
        len(labels),
        sum(labels.values()),
        sum(dual_labels.values()),
        orig_name,
        dual_name,
    )


def build(
    corpus_dir: str | Path,
    timeout: float,
    out_dir: str | Path,
    split: str = "pretrain",
    workers: int = 1,
) -> DatasetManifest:
    """Run the label/filter/augment protocol over every ``*.cnf`` in a directory.

    Extraction jobs are independent, so they run on a bounded worker pool;
    entries are sorted by source path afterwards so parallelism never changes
    the output. The manifest is written to ``<out_dir>/manifest.nbm``.
    """
    if split not in SPLITS:
        raise ValueError(f"split must be one of {SPLITS}")
    corpus = Path(corpus_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sources = sorted(str(p) for p in corpus.glob("*.cnf"))
    jobs = [(src, str(out), timeout) for src in sources]

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_process_file, jobs))
    else:
        entries = [_process_file(job) for job in jobs]

    entries.sort(key=lambda e: e.source)
    manifest = DatasetManifest(split=split, timeout=timeout, entries=entries)
    save_manifest(manifest, out / "manifest.nbm")
    return manifest


def stats(manifest: DatasetManifest) -> DatasetStats:
    """Corpus summary over accepted entries, post-augmentation.

    The backbone proportion is mean backbone count over mean variable count;
    the label balance is the positive fraction over all labels of all written
    graphs (exactly 0.5 when every dual negates its original's labels).
    """
    if not manifest.entries:
        raise ValueError("manifest has no entries")
    accepted = [e for e in manifest.entries if e.accepted]
    if not accepted:
        raise ValueError("manifest has no accepted entries")
    count = len(accepted)
    mean_vars = sum(e.num_vars for e in accepted) / count
    mean_clauses = sum(e.num_clauses for e in accepted) / count
    mean_backbone = sum(e.num_backbone for e in accepted) / count
    total_labels = 2 * sum(e.num_backbone for e in accepted)
    positive = sum(e.pos_orig + e.pos_dual for e in accepted)
    return DatasetStats(
        accepted_formulas=count,
        graph_count=2 * count,
        mean_vars=mean_vars,
        mean_clauses=mean_clauses,
        mean_backbone=mean_backbone,
        backbone_proportion=mean_backbone / mean_vars if mean_vars else 0.0,
        label_balance=positive / total_labels,
    )


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    lines = ["NBM 1", f"s {manifest.split} {manifest.timeout:g}"]
    for e in manifest.entries:
        lines.append(
            f"r {e.source} {e.status} {e.num_vars} {e.num_clauses} {e.num_backbone} "
            f"{e.pos_orig} {e.pos_dual} {e.graph_original or '-'} {e.graph_dual or '-'}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def load_manifest(path: str | Path) -> DatasetManifest:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "NBM 1":
        raise ValueError("expected 'NBM 1' header")
    if len(lines) < 2 or not lines[1].startswith("s "):
        raise ValueError("expected 's <split> <timeout>' line")
    _s, split, timeout_s = lines[1].split()
    entries = []
    for raw in lines[2:]:
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] != "r" or len(fields) != 10:
            raise ValueError(f"malformed manifest record {raw!r}")
        entries.append(
            ManifestEntry(
                source=fields[1],
                status=fields[2],
                num_vars=int(fields[3]),
                num_clauses=int(fields[4]),
                num_backbone=int(fields[5]),
                pos_orig=int(fields[6]),
                pos_dual=int(fields[7]),
                graph_original=None if fields[8] == "-" else fields[8],
                graph_dual=None if fields[9] == "-" else fields[9],
            )
        )
    return DatasetManifest(split=split, timeout=float(timeout_s), entries=entries)


# -- synthetic corpora -------------------------------------------------------


def save_dimacs_corpus(
    formulas: list[CnfFormula], out_dir: str | Path, prefix: str = "formula"
) -> list[Path]:
    """Write formulas as ``<prefix>-0000.cnf`` files; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, formula in enumerate(formulas):
        path = out / f"{prefix}-{i:04d}.cnf"
        save_dimacs(formula, path)
        paths.append(path)
    return paths


def gen_random_ksat(n: int, m: int, k: int, seed: int) -> CnfFormula:
    """Uniform random k-SAT: m clauses of k distinct variables, random signs."""
    if k < 1 or n < 1 or m < 0:
        raise ValueError("need n >= 1, k >= 1, m >= 0")
    if k > n:
        raise ValueError(f"clause width {k} exceeds variable count {n}")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        chosen = rng.sample(range(1, n + 1), k)
        clauses.append([v if rng.getrandbits(1) else -v for v in chosen])
    return CnfFormula(n, clauses)


def gen_pigeonhole(pigeons: int, holes: int) -> CnfFormula:
    """Pigeons-into-holes: satisfiable iff pigeons <= holes."""
    if pigeons < 1 or holes < 1:
        raise ValueError("need at least one pigeon and one hole")

    def var(p: int, h: int) -> int:
        return (p - 1) * holes + h

    clauses = [[var(p, h) for h in range(1, holes + 1)] for p in range(1, pigeons + 1)]
    for h in range(1, holes + 1):
        for p1 in range(1, pigeons + 1):
            for p2 in range(p1 + 1, pigeons + 1):
                clauses.append([-var(p1, h), -var(p2, h)])
    return CnfFormula(pigeons * holes, clauses)


def gen_coloring(vertices: int, colors: int, edge_prob: float, seed: int) -> CnfFormula:
    """Graph k-coloring of a random graph, with vertex 1 pinned to color 1.

    The pinned color is a common symmetry break; it also tends to give the
    instance a nonempty backbone, which makes these useful label sources.
    """
    if vertices < 1 or colors < 1:
        raise ValueError("need at least one vertex and one color")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0,1]")
    rng = random.Random(seed)

    def var(v: int, c: int) -> int:
        return (v - 1) * colors + c

    clauses = [[var(v, c) for c in range(1, colors + 1)] for v in range(1, vertices + 1)]
    clauses.append([var(1, 1)])
    for u in range(1, vertices + 1):
        for v in range(u + 1, vertices + 1):
            if rng.random() < edge_prob:
                for c in range(1, colors + 1):
                    clauses.append([-var(u, c), -var(v, c)])
    return CnfFormula(vertices * colors, clauses)
