"""Exact backbone extraction for satisfiable formulas.

The backbone is the set of literals true in every satisfying assignment.
Extraction uses iterative model-intersection filtering: solve once, seed the
candidate set with the first model's literals, then repeatedly refute one
candidate under an assumption. An UNSAT answer confirms a backbone literal; a
SAT answer intersects the candidates with the new model. One incremental
solver instance is reused so learned clauses amortize across calls, and the
whole run takes at most num_vars + 1 solver calls.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .cnf import BackboneLabeling, CnfFormula
from .solver import Solver, SolverConfig, Status


class BackboneStatus(str, Enum):
    COMPLETE = "COMPLETE"
    TIMEOUT = "TIMEOUT"
    UNSAT_INPUT = "UNSAT_INPUT"


@dataclass
class BackboneResult:
    status: BackboneStatus
    labeling: BackboneLabeling | None
    solver_calls: int
    wall_time: float


def extract_backbone(
    formula: CnfFormula,
    timeout: float | None = None,
    config: SolverConfig | None = None,
) -> BackboneResult:
    """Compute the exact backbone, or time out with no partial labels.

    The timeout is checked between solver calls and the remaining budget is
    passed down as each call's time limit; a mid-extraction timeout discards
    everything (partially labeled formulas are not useful as training data).
    """
    started = time.perf_counter()
    solver = Solver(formula, config or SolverConfig())
    calls = 0

    def remaining() -> float | None:
        if timeout is None:
            return None
        return timeout - (time.perf_counter() - started)

    def timed_out() -> BackboneResult:
        return BackboneResult(BackboneStatus.TIMEOUT, None, calls, time.perf_counter() - started)

    budget = remaining()
    if budget is not None and budget <= 0:
        return timed_out()
    calls += 1
    first = solver.solve(time_limit=budget)
    if first.status is Status.UNKNOWN:
        return timed_out()
    if first.status is Status.UNSAT:
        return BackboneResult(
            BackboneStatus.UNSAT_INPUT, None, calls, time.perf_counter() - started
        )

    assert first.model is not None
    candidates = {var: phase for var, phase in first.model.items()}
    backbone: BackboneLabeling = {}

    while candidates:
        var = min(candidates)  # ascending variable order, for determinism
        phase = candidates.pop(var)
        lit = var if phase else -var
        budget = remaining()
        if budget is not None and budget <= 0:
            return timed_out()
        calls += 1
        res = solver.solve([-lit], time_limit=budget)
        if res.status is Status.UNKNOWN:
            return timed_out()
        if res.status is Status.UNSAT:
            backbone[var] = phase
        else:
            assert res.model is not None
            model = res.model
            candidates = {v: p for v, p in candidates.items() if model[v] == p}

    labeling = dict(sorted(backbone.items()))
    return BackboneResult(
        BackboneStatus.COMPLETE, labeling, calls, time.perf_counter() - started
    )


def is_backbone_literal(
    formula: CnfFormula, lit: int, config: SolverConfig | None = None
) -> bool:
    """Point query: does every satisfying assignment make ``lit`` true?"""
    if lit == 0 or abs(lit) > formula.num_vars:
        raise ValueError(f"literal {lit} out of range")
    solver = Solver(formula, config or SolverConfig())
    if solver.solve().status is not Status.SAT:
        raise ValueError("backbone membership is undefined for unsatisfiable formulas")
    return solver.solve([-lit]).status is Status.UNSAT


def format_backbone(result: BackboneResult) -> str:
    """NBB 1 text: header with status, then one ``<var> <phase>`` line each."""
    lines = [f"NBB 1 {result.status.value}"]
    if result.status is BackboneStatus.COMPLETE:
        assert result.labeling is not None
        for var in sorted(result.labeling):
            lines.append(f"{var} {result.labeling[var]}")
    return "\n".join(lines) + "\n"


def parse_backbone(text: str) -> tuple[BackboneStatus, BackboneLabeling | None]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("NBB 1"):
        raise ValueError("expected 'NBB 1 <status>' header")
    parts = lines[0].split()
    if len(parts) != 3:
        raise ValueError("expected 'NBB 1 <status>' header")
    status = BackboneStatus(parts[2])
    if status is not BackboneStatus.COMPLETE:
        return status, None
    labeling: BackboneLabeling = {}
    for line in lines[1:]:
        var_s, phase_s = line.split()
        var, phase = int(var_s), int(phase_s)
        if var < 1 or phase not in (0, 1):
            raise ValueError(f"bad backbone line {line!r}")
        labeling[var] = phase
    return status, labeling


def save_backbone(result: BackboneResult, path: str | Path) -> None:
    Path(path).write_text(format_backbone(result))


def load_backbone(path: str | Path) -> tuple[BackboneStatus, BackboneLabeling | None]:
    return parse_backbone(Path(path).read_text())
