"""Controlled solver comparisons: run matrices, cactus/scatter series, deltas.

Each run is an isolated single-threaded job, so the matrix is distributed
over a process pool with one problem per worker at a time. Wall time covers
the solve call only; hint-file loading is excluded, and the time spent
producing hints is reported separately as inference time (read from an
optional ``inference.json`` next to the hint files, mapping problem stem to
seconds).
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .cnf import read_dimacs
from .hints import load_hints
from .solver import Solver, SolverConfig, Status

CSV_COLUMNS = (
    "problem",
    "config",
    "status",
    "wall_time",
    "conflicts",
    "decisions",
    "propagations",
    "restarts",
    "inference_time",
    "reverted",
)


@dataclass
class RunConfig:
    """One column of the experiment matrix: a solver setup plus hint source."""

    name: str
    solver: SolverConfig = field(default_factory=SolverConfig)
    hints_dir: str | None = None


@dataclass
class RunRecord:
    problem: str
    config: str
    status: Status
    wall_time: float
    conflicts: int
    decisions: int
    propagations: int
    restarts: int
    inference_time: float = 0.0
    reverted: bool = False

    @property
    def solved(self) -> bool:
        return self.status is not Status.UNKNOWN


@dataclass
class DeltaSummary:
    """Pairwise comparison of config a against config b (b as the baseline)."""

    config_a: str
    config_b: str
    solved_a: int
    solved_b: int
    solved_delta: int
    improvement_percent: float | None  # (a-b)/b, undefined when b solved none
    faster_a: int  # problems a solved strictly faster (both non-reverted)
    faster_b: int
    newly_solved_a: int  # solved by a, unsolved by b
    newly_solved_b: int
    mean_time_saving: float  # mean of (t_b - t_a); unsolved at the limit
    par2_a: float
    par2_b: float
    compared_problems: int


def _run_job(args: tuple[str, RunConfig, float, float]) -> RunRecord:
    problem, config, time_limit, inference_time = args
    formula = read_dimacs(problem)
    hints = None
    reverted = False
    if config.hints_dir is not None:
        hint_path = Path(config.hints_dir) / (Path(problem).stem + ".nbh")
        if hint_path.exists():
            hints = load_hints(hint_path)
        else:
            reverted = True
    solver_cfg = replace(config.solver, time_limit=time_limit)
    solver = Solver(formula, solver_cfg, hints)
    started = time.perf_counter()
    result = solver.solve()
    elapsed = time.perf_counter() - started
    stats = result.stats
    return RunRecord(
        problem=problem,
        config=config.name,
        status=result.status,
        wall_time=elapsed,
        conflicts=stats.conflicts,
        decisions=stats.decisions,
        propagations=stats.propagations,
        restarts=stats.restarts,
        inference_time=0.0 if reverted else inference_time,
        reverted=reverted,
    )


def _inference_times(config: RunConfig) -> dict[str, float]:
    if config.hints_dir is None:
        return {}
    path = Path(config.hints_dir) / "inference.json"
    if not path.exists():
        return {}
    return {str(k): float(v) for k, v in json.loads(path.read_text()).items()}


def run_experiment(
    problems_dir: str | Path,
    configs: Sequence[RunConfig],
    time_limit: float,
    workers: int = 1,
) -> list[RunRecord]:
    """Run every config on every ``*.cnf`` problem; returns a complete matrix."""
    names = [c.name for c in configs]
    if len(set(names)) != len(names):
        raise ValueError("config names must be unique")
    problems = sorted(str(p) for p in Path(problems_dir).glob("*.cnf"))
    jobs = []
    for config in configs:
        times = _inference_times(config)
        for problem in problems:
            jobs.append((problem, config, time_limit, times.get(Path(problem).stem, 0.0)))

    workers = min(workers, os.cpu_count() or 1)  # one problem per core, never more
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_job, jobs))
    else:
        records = [_run_job(job) for job in jobs]
    records.sort(key=lambda r: (r.problem, r.config))
    return records


def _by_config(records: Sequence[RunRecord], config: str) -> dict[str, RunRecord]:
    out = {r.problem: r for r in records if r.config == config}
    if not out:
        raise ValueError(f"no records for config {config!r}")
    return out


def cactus_data(records: Sequence[RunRecord], config: str) -> list[tuple[int, float]]:
    """Solved-instance counts against sorted solve times: (k, t_k) pairs."""
    times = sorted(r.wall_time for r in _by_config(records, config).values() if r.solved)
    return [(k, t) for k, t in enumerate(times, start=1)]


def scatter_data(
    records: Sequence[RunRecord],
    config_a: str,
    config_b: str,
    time_limit: float,
) -> list[tuple[str, float, float]]:
    """Per-problem time pairs, with unsolved runs mapped to the time limit."""
    runs_a = _by_config(records, config_a)
    runs_b = _by_config(records, config_b)
    if set(runs_a) != set(runs_b):
        raise ValueError("configs ran different problem sets")

    def point(r: RunRecord) -> float:
        return r.wall_time if r.solved else time_limit

    return [(p, point(runs_a[p]), point(runs_b[p])) for p in sorted(runs_a)]


def summarize(
    records: Sequence[RunRecord],
    config_a: str,
    config_b: str,
    time_limit: float,
) -> DeltaSummary:
    """Solve counts, pairwise speed wins, mean saving, and PAR-2 scores.

    Problems where either side reverted to baseline (missing hints) are
    excluded from the pairwise delta analysis but still count toward each
    config's own solve count and PAR-2.
    """
    runs_a = _by_config(records, config_a)
    runs_b = _by_config(records, config_b)
    if set(runs_a) != set(runs_b):
        raise ValueError("configs ran different problem sets")

    solved_a = sum(1 for r in runs_a.values() if r.solved)
    solved_b = sum(1 for r in runs_b.values() if r.solved)

    def par2(runs: dict[str, RunRecord]) -> float:
        total = sum(r.wall_time if r.solved else 2.0 * time_limit for r in runs.values())
        return total / len(runs)

    compared = [p for p in runs_a if not runs_a[p].reverted and not runs_b[p].reverted]
    faster_a = faster_b = 0
    newly_a = newly_b = 0
    savings = []
    for p in compared:
        ra, rb = runs_a[p], runs_b[p]
        ta = ra.wall_time if ra.solved else time_limit
        tb = rb.wall_time if rb.solved else time_limit
        if ta < tb:
            faster_a += 1
        elif tb < ta:
            faster_b += 1
        if ra.solved and not rb.solved:
            newly_a += 1
        if rb.solved and not ra.solved:
            newly_b += 1
        savings.append(tb - ta)

    return DeltaSummary(
        config_a=config_a,
        config_b=config_b,
        solved_a=solved_a,
        solved_b=solved_b,
        solved_delta=solved_a - solved_b,
        improvement_percent=(100.0 * (solved_a - solved_b) / solved_b) if solved_b else None,
        faster_a=faster_a,
        faster_b=faster_b,
        newly_solved_a=newly_a,
        newly_solved_b=newly_b,
        mean_time_saving=sum(savings) / len(savings) if savings else 0.0,
        par2_a=par2(runs_a),
        par2_b=par2(runs_b),
        compared_problems=len(compared),
    )


def write_records_csv(records: Sequence[RunRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.problem,
                    r.config,
                    r.status.value,
                    f"{r.wall_time:.6f}",
                    r.conflicts,
                    r.decisions,
                    r.propagations,
                    r.restarts,
                    f"{r.inference_time:.6f}",
                    int(r.reverted),
                ]
            )


def read_records_csv(path: str | Path) -> list[RunRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(f"expected columns {CSV_COLUMNS}")
        for row in reader:
            records.append(
                RunRecord(
                    problem=row["problem"],
                    config=row["config"],
                    status=Status(row["status"]),
                    wall_time=float(row["wall_time"]),
                    conflicts=int(row["conflicts"]),
                    decisions=int(row["decisions"]),
                    propagations=int(row["propagations"]),
                    restarts=int(row["restarts"]),
                    inference_time=float(row["inference_time"]),
                    reverted=bool(int(row["reverted"])),
                )
            )
    return records
