"""Conflict-driven clause learning solver.

Two-watched-literal propagation, first-UIP learning with non-chronological
backjumping, exponential VSIDS branching, Luby restarts, phase saving with
optional periodic rephasing, incremental solving under assumptions, and
offline phase initialization from hints.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from heapq import heappop, heappush
from typing import Iterable, Sequence

from .cnf import Assignment, CnfFormula, evaluate
from .hints import PhaseHints

PHASE_CHOICES = ("false", "true", "hints")

_ACTIVITY_RESCALE = 1e100


class Status(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass
class ClauseDbConfig:
    """Learned-clause reduction knobs."""

    reduce_base: int = 2000  # learned clauses held before the first reduction
    reduce_inc: int = 300  # threshold growth after each reduction
    keep_lbd: int = 2  # clauses at or below this LBD are never dropped

    def __post_init__(self) -> None:
        if self.reduce_base < 0 or self.reduce_inc < 0 or self.keep_lbd < 0:
            raise ValueError("clause database limits must be nonnegative")


@dataclass
class SolverConfig:
    seed: int = 0
    var_decay: float = 0.95
    restart_base: int = 100  # Luby unit, in conflicts
    phase_default: str = "false"  # "false" | "true" | "hints"
    rephase_enabled: bool = True
    rephase_interval: int = 1000  # conflicts between saved-phase resets
    clause_db: ClauseDbConfig = field(default_factory=ClauseDbConfig)
    time_limit: float | None = None
    conflict_limit: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.var_decay < 1.0:
            raise ValueError("var_decay must lie strictly between 0 and 1")
        if self.restart_base <= 0:
            raise ValueError("restart_base must be positive")
        if self.rephase_interval <= 0:
            raise ValueError("rephase_interval must be positive")
        if self.phase_default not in PHASE_CHOICES:
            raise ValueError(f"phase_default must be one of {PHASE_CHOICES}")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time_limit must be nonnegative")
        if self.conflict_limit is not None and self.conflict_limit < 0:
            raise ValueError("conflict_limit must be nonnegative")


@dataclass
class SolverStats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learned_clauses: int = 0
    wall_time: float = 0.0

    def counters(self) -> tuple[int, int, int, int, int]:
        """Deterministic counters, i.e. everything except wall time."""
        return (
            self.conflicts,
            self.decisions,
            self.propagations,
            self.restarts,
            self.learned_clauses,
        )


@dataclass
class SolveResult:
    status: Status
    model: Assignment | None
    stats: SolverStats


class _Clause:
    __slots__ = ("lits", "learned", "lbd")

    def __init__(self, lits: list[int], learned: bool = False, lbd: int = 0):
        self.lits = lits
        self.learned = learned
        self.lbd = lbd


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) // 2
        seq -= 1
        i %= size
    return 1 << seq


class Solver:
    """Incremental CDCL solver over a fixed formula.

    Learned clauses persist across :meth:`solve` calls; assumptions are
    handled as forced top-level decisions in the style of incremental SAT
    interfaces. A solver instance is single-threaded and must not be shared
    during a solve.
    """

    def __init__(
        self,
        formula: CnfFormula,
        config: SolverConfig | None = None,
        hints: PhaseHints | None = None,
    ):
        self.formula = formula
        self.config = config or SolverConfig()
        n = formula.num_vars
        self.num_vars = n
        self.stats = SolverStats()

        self._values = [0] * (n + 1)  # 0 unassigned, 1 true, -1 false
        self._level = [0] * (n + 1)
        self._reason: list[_Clause | None] = [None] * (n + 1)
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._watches: dict[int, list[_Clause]] = {}
        self._learned: list[_Clause] = []
        self._activity = [0.0] * (n + 1)
        self._var_inc = 1.0
        self._order: list[tuple[float, int]] = [(0.0, v) for v in range(1, n + 1)]
        self._seen = [False] * (n + 1)
        self._unsat = False
        self._max_learnt = self.config.clause_db.reduce_base

        if hints:
            excess = sorted(v for v in hints if v < 1 or v > n)
            if excess:
                warnings.warn(f"ignoring hint entries for unknown variables {excess}", stacklevel=3)
        self._base_phase = self._initial_phases(hints)
        self._saved = list(self._base_phase)

        for clause in formula.clauses:
            self._add_clause(clause)

    def _initial_phases(self, hints: PhaseHints | None) -> list[bool]:
        default = self.config.phase_default == "true"
        phases = [default] * (self.num_vars + 1)
        if hints and self.config.phase_default == "hints":
            # Hinted variables start from the predicted phase; unhinted ones
            # keep the false default. Confidence is carried but unused here.
            for var, (phase, _conf) in hints.items():
                if 1 <= var <= self.num_vars:
                    phases[var] = bool(phase)
        return phases

    # -- clause storage -----------------------------------------------------

    def _add_clause(self, lits: Iterable[int]) -> None:
        seen: set[int] = set()
        out: list[int] = []
        for lit in lits:
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        if not out:
            self._unsat = True
            return
        if len(out) == 1:
            if not self._enqueue(out[0], None):
                self._unsat = True
            return
        clause = _Clause(out)
        self._watches.setdefault(out[0], []).append(clause)
        self._watches.setdefault(out[1], []).append(clause)

    def _attach_learned(self, lits: list[int], lbd: int) -> _Clause:
        clause = _Clause(lits, learned=True, lbd=lbd)
        self._watches.setdefault(lits[0], []).append(clause)
        self._watches.setdefault(lits[1], []).append(clause)
        self._learned.append(clause)
        return clause

    def _reduce_db(self) -> None:
        locked = {
            id(self._reason[abs(c.lits[0])]): True
            for c in self._learned
            if self._reason[abs(c.lits[0])] is c
        }
        keep_lbd = self.config.clause_db.keep_lbd
        candidates = [
            c
            for c in self._learned
            if c.lbd > keep_lbd and len(c.lits) > 2 and id(c) not in locked
        ]
        candidates.sort(key=lambda c: (c.lbd, len(c.lits)))
        drop = set(map(id, candidates[len(candidates) // 2 :]))
        self._max_learnt += self.config.clause_db.reduce_inc
        if not drop:
            return
        for clause in self._learned:
            if id(clause) in drop:
                self._watches[clause.lits[0]].remove(clause)
                self._watches[clause.lits[1]].remove(clause)
        self._learned = [c for c in self._learned if id(c) not in drop]

    # -- assignment ---------------------------------------------------------

    def _enqueue(self, lit: int, reason: _Clause | None) -> bool:
        var = lit if lit > 0 else -lit
        val = self._values[var]
        if val != 0:
            return (val == 1) == (lit > 0)
        self._values[var] = 1 if lit > 0 else -1
        self._level[var] = len(self._trail_lim)
        self._reason[var] = reason
        self._saved[var] = lit > 0
        self._trail.append(lit)
        if reason is not None:
            self.stats.propagations += 1
        return True

    def _backjump(self, target: int) -> None:
        if len(self._trail_lim) <= target:
            return
        head = self._trail_lim[target]
        order = self._order
        activity = self._activity
        for lit in self._trail[head:]:
            var = lit if lit > 0 else -lit
            self._values[var] = 0
            self._reason[var] = None
            heappush(order, (-activity[var], var))
        del self._trail[head:]
        del self._trail_lim[target:]
        self._qhead = len(self._trail)

    # -- propagation --------------------------------------------------------

    def _propagate(self) -> _Clause | None:
        values = self._values
        watches = self._watches
        while self._qhead < len(self._trail):
            lit = self._trail[self._qhead]
            self._qhead += 1
            neg = -lit
            old = watches.get(neg)
            if not old:
                continue
            kept: list[_Clause] = []
            conflict: _Clause | None = None
            for idx, clause in enumerate(old):
                lits = clause.lits
                if lits[0] == neg:
                    lits[0] = lits[1]
                    lits[1] = neg
                first = lits[0]
                fval = values[first] if first > 0 else -values[-first]
                if fval == 1:
                    kept.append(clause)
                    continue
                for k in range(2, len(lits)):
                    other = lits[k]
                    oval = values[other] if other > 0 else -values[-other]
                    if oval != -1:
                        lits[1] = other
                        lits[k] = neg
                        watches.setdefault(other, []).append(clause)
                        break
                else:
                    kept.append(clause)
                    if fval == -1:
                        conflict = clause
                        kept.extend(old[idx + 1 :])
                        break
                    self._enqueue(first, clause)
            watches[neg] = kept
            if conflict is not None:
                return conflict
        return None

    # -- conflict analysis --------------------------------------------------

    def _bump(self, var: int) -> None:
        act = self._activity[var] + self._var_inc
        self._activity[var] = act
        if act > _ACTIVITY_RESCALE:
            for v in range(1, self.num_vars + 1):
                self._activity[v] *= 1.0 / _ACTIVITY_RESCALE
            self._var_inc *= 1.0 / _ACTIVITY_RESCALE
            act = self._activity[var]
        heappush(self._order, (-act, var))

    def _analyze(self, conflict: _Clause) -> tuple[list[int], int, int]:
        """First-UIP learned clause, backjump level, and LBD."""
        seen = self._seen
        level = self._level
        trail = self._trail
        current = len(self._trail_lim)
        learnt: list[int] = []
        to_clear: list[int] = []
        counter = 0
        p = 0
        reason_lits = conflict.lits
        idx = len(trail) - 1

        while True:
            for q in reason_lits[1:] if p else reason_lits:
                var = abs(q)
                if not seen[var] and level[var] > 0:
                    seen[var] = True
                    to_clear.append(var)
                    self._bump(var)
                    if level[var] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            reason = self._reason[abs(p)]
            assert reason is not None and reason.lits[0] == p
            reason_lits = reason.lits

        for var in to_clear:
            seen[var] = False

        if learnt:
            # Position 1 must carry a highest-remaining-level literal so the
            # watch invariant holds after the backjump.
            widx = max(range(len(learnt)), key=lambda i: (level[abs(learnt[i])], -i))
            learnt[0], learnt[widx] = learnt[widx], learnt[0]
            backjump = level[abs(learnt[0])]
            lbd = len({level[abs(q)] for q in learnt}) + 1
        else:
            backjump = 0
            lbd = 1
        return [-p] + learnt, backjump, lbd

    # -- search -------------------------------------------------------------

    def _decide_var(self) -> int | None:
        values = self._values
        activity = self._activity
        order = self._order
        while order:
            neg_act, var = heappop(order)
            if values[var] != 0:
                continue
            if -neg_act == activity[var]:
                return var
            heappush(order, (-activity[var], var))
        return None

    def _result(self, status: Status, model: Assignment | None, started: float) -> SolveResult:
        stats = replace(self.stats, wall_time=time.perf_counter() - started)
        return SolveResult(status, model, stats)

    def solve(
        self,
        assumptions: Sequence[int] = (),
        *,
        time_limit: float | None = None,
        conflict_limit: int | None = None,
    ) -> SolveResult:
        cfg = self.config
        started = time.perf_counter()
        time_limit = cfg.time_limit if time_limit is None else time_limit
        conflict_limit = cfg.conflict_limit if conflict_limit is None else conflict_limit

        for lit in assumptions:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"assumption literal {lit} out of range")
        assumed = set(assumptions)
        if any(-lit in assumed for lit in assumed):
            return self._result(Status.UNSAT, None, started)

        self._backjump(0)
        if self._unsat:
            return self._result(Status.UNSAT, None, started)

        conflicts_at_start = self.stats.conflicts
        restart_idx = 0
        restart_budget = luby(0) * cfg.restart_base
        conflicts_since_restart = 0
        next_rephase = cfg.rephase_interval

        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.stats.conflicts += 1
                conflicts_since_restart += 1
                if not self._trail_lim:
                    self._unsat = True
                    return self._result(Status.UNSAT, None, started)
                learnt, backjump, lbd = self._analyze(conflict)
                self._backjump(backjump)
                self.stats.learned_clauses += 1
                if len(learnt) == 1:
                    ok = self._enqueue(learnt[0], None)
                    assert ok
                else:
                    clause = self._attach_learned(learnt, lbd)
                    self._enqueue(learnt[0], clause)
                self._var_inc /= cfg.var_decay
                conflicts_here = self.stats.conflicts - conflicts_at_start
                if cfg.rephase_enabled and conflicts_here >= next_rephase:
                    self._saved = list(self._base_phase)
                    next_rephase += cfg.rephase_interval
                if len(self._learned) >= self._max_learnt:
                    self._reduce_db()
                continue

            conflicts_here = self.stats.conflicts - conflicts_at_start
            if conflict_limit is not None and conflicts_here >= conflict_limit:
                return self._result(Status.UNKNOWN, None, started)
            if time_limit is not None and time.perf_counter() - started >= time_limit:
                return self._result(Status.UNKNOWN, None, started)

            if conflicts_since_restart >= restart_budget:
                restart_idx += 1
                restart_budget = luby(restart_idx) * cfg.restart_base
                conflicts_since_restart = 0
                if self._trail_lim:
                    self.stats.restarts += 1
                    self._backjump(0)
                continue

            level = len(self._trail_lim)
            if level < len(assumptions):
                lit = assumptions[level]
                var = lit if lit > 0 else -lit
                val = self._values[var]
                if val == (1 if lit > 0 else -1):
                    self._trail_lim.append(len(self._trail))  # already true: empty level
                    continue
                if val != 0:
                    return self._result(Status.UNSAT, None, started)
                self._trail_lim.append(len(self._trail))
                self._enqueue(lit, None)
                self.stats.decisions += 1
                continue

            var = self._decide_var()
            if var is None:
                model = {v: 1 if self._values[v] == 1 else 0 for v in range(1, self.num_vars + 1)}
                if not evaluate(self.formula, model):
                    raise RuntimeError("internal error: computed model fails verification")
                return self._result(Status.SAT, model, started)
            self._trail_lim.append(len(self._trail))
            self._enqueue(var if self._saved[var] else -var, None)
            self.stats.decisions += 1


def solve(
    formula: CnfFormula,
    config: SolverConfig | None = None,
    hints: PhaseHints | None = None,
) -> SolveResult:
    """One-shot solve. Hints only take effect when phase_default is "hints"."""
    return Solver(formula, config, hints).solve()


def solve_with_assumptions(
    formula: CnfFormula,
    assumptions: Sequence[int],
    config: SolverConfig | None = None,
) -> SolveResult:
    return Solver(formula, config).solve(assumptions)


def check_model(formula: CnfFormula, result: SolveResult) -> bool:
    if result.status is not Status.SAT or result.model is None:
        raise ValueError("check_model requires a SAT result carrying a model")
    return evaluate(formula, result.model)
