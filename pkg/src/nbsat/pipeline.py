"""End-to-end flow: encode a formula, infer phase hints once, then solve.

The inference stage is an external-process boundary: this package shells out
to a predictor command with the documented interface
``<predictor> predict --ckpt <ckpt> --graph <file.nbg> -o <file.nbh>``, or
consumes a pre-built NBH file directly. When no hints can be obtained the
solve falls back to the baseline configuration and the result says so.
"""

from __future__ import annotations

import subprocess
import tempfile
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .cnf import read_dimacs
from .graph import encode, save_graph
from .hints import PhaseHints, load_hints
from .solver import Solver, SolverConfig, SolveResult


class PipelineStageError(RuntimeError):
    """An error attributed to one named pipeline stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass
class PipelineResult:
    result: SolveResult
    used_hints: bool
    fallback: bool  # True when inference was unavailable or failed
    inference_time: float
    inference_calls: int
    graph_path: str
    hints_path: str | None


def pipeline_solve(
    cnf_path: str | Path,
    checkpoint: str | Path | None = None,
    solver_config: SolverConfig | None = None,
    hints_path: str | Path | None = None,
    predictor: Sequence[str] = ("nbtrain",),
    workdir: str | Path | None = None,
) -> PipelineResult:
    """Solve one formula with hints inferred exactly once before search.

    ``hints_path`` short-circuits inference with a pre-built NBH file. With a
    checkpoint, the predictor command is invoked once; any failure there is a
    recorded fallback to the baseline solve, never a pipeline error.
    """
    cfg = solver_config or SolverConfig()
    cnf_path = Path(cnf_path)
    if workdir is None:
        workdir = Path(tempfile.mkdtemp(prefix="nbsat-pipeline-"))
    else:
        workdir = Path(workdir)
        workdir.mkdir(parents=True, exist_ok=True)

    try:
        formula = read_dimacs(cnf_path)
    except Exception as exc:
        raise PipelineStageError("parse", str(exc)) from exc

    graph_path = workdir / (cnf_path.stem + ".nbg")
    try:
        save_graph(encode(formula), graph_path)
    except Exception as exc:
        raise PipelineStageError("encode", str(exc)) from exc

    hints: PhaseHints | None = None
    inference_time = 0.0
    inference_calls = 0
    fallback = False
    out_hints: str | None = None

    if hints_path is not None:
        try:
            hints = load_hints(hints_path)
            out_hints = str(hints_path)
        except Exception as exc:
            raise PipelineStageError("hints", str(exc)) from exc
    elif checkpoint is not None:
        produced = workdir / (cnf_path.stem + ".nbh")
        cmd = [
            *predictor,
            "predict",
            "--ckpt",
            str(checkpoint),
            "--graph",
            str(graph_path),
            "-o",
            str(produced),
        ]
        started = time.perf_counter()
        inference_calls += 1
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True)
            inference_time = time.perf_counter() - started
            if proc.returncode != 0 or not produced.exists():
                fallback = True
            else:
                hints = load_hints(produced)
                out_hints = str(produced)
        except (OSError, ValueError):
            inference_time = time.perf_counter() - started
            fallback = True
    else:
        fallback = True

    if hints is not None:
        cfg = replace(cfg, phase_default="hints")
    try:
        result = Solver(formula, cfg, hints).solve()
    except Exception as exc:
        raise PipelineStageError("solve", str(exc)) from exc

    return PipelineResult(
        result=result,
        used_hints=hints is not None,
        fallback=fallback,
        inference_time=inference_time,
        inference_calls=inference_calls,
        graph_path=str(graph_path),
        hints_path=out_hints,
    )
