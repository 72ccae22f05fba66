"""CNF data model, DIMACS I/O, assignment evaluation, and formula transforms.

Literals follow the DIMACS convention: a nonzero signed integer, where ``v``
is the positive literal of variable ``v`` (phase 1) and ``-v`` its complement
(phase 0). Assignments and backbone labelings map variables to phase bits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

Lit = int
Clause = list[int]
Assignment = dict[int, int]
BackboneLabeling = dict[int, int]


class DimacsError(ValueError):
    """Malformed DIMACS CNF input."""


def make_lit(var: int, phase: int) -> Lit:
    """Literal for ``var`` that is true exactly when the variable has ``phase``."""
    if var < 1:
        raise ValueError(f"variable index must be >= 1, got {var}")
    return var if phase else -var


def lit_var(lit: Lit) -> int:
    return lit if lit > 0 else -lit


def lit_phase(lit: Lit) -> int:
    """Phase bit the literal asserts for its variable."""
    return 1 if lit > 0 else 0


@dataclass
class CnfFormula:
    """A CNF formula as a clause list over variables 1..num_vars.

    Variables declared in the header but absent from every clause are legal;
    they are free and still count toward model size. An empty clause is legal
    too (it encodes unsatisfiability).
    """

    num_vars: int
    clauses: list[Clause] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range for {self.num_vars} variables")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def variables(self) -> range:
        return range(1, self.num_vars + 1)


def tautological_clause_indices(formula: CnfFormula) -> list[int]:
    """Indices of clauses containing both a literal and its complement."""
    out = []
    for i, clause in enumerate(formula.clauses):
        lits = set(clause)
        if any(-lit in lits for lit in clause):
            out.append(i)
    return out


def _dedup(lits: Iterable[Lit]) -> Clause:
    seen: set[int] = set()
    out: Clause = []
    for lit in lits:
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return out


def parse_dimacs(text: str | bytes) -> CnfFormula:
    """Parse DIMACS CNF text.

    Comment lines start with ``c``; a ``%`` line ends the clause section (a
    trailer convention in archival benchmark files). Duplicate literals inside
    a clause are dropped; tautological clauses are kept (see
    :func:`tautological_clause_indices`). A header clause count that disagrees
    with the actual number of clauses is a warning, not an error.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")

    num_vars: int | None = None
    declared_clauses = 0
    clauses: list[Clause] = []
    current: Clause = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        if line[0] == "%":
            break
        if line[0] == "p":
            if num_vars is not None:
                raise DimacsError(f"line {lineno}: duplicate 'p cnf' header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars, declared_clauses = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: non-integer header field") from exc
            if num_vars < 0 or declared_clauses < 0:
                raise DimacsError(f"line {lineno}: negative header field")
            continue
        if num_vars is None:
            raise DimacsError(f"line {lineno}: clause data before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: non-integer token {tok!r}") from exc
            if lit == 0:
                clauses.append(_dedup(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsError(
                        f"line {lineno}: literal {lit} exceeds declared variable count {num_vars}"
                    )
                current.append(lit)

    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        # Tolerate a missing final 0; archival files are sloppy about it.
        clauses.append(_dedup(current))
    if len(clauses) != declared_clauses:
        warnings.warn(
            f"header declares {declared_clauses} clauses but {len(clauses)} were parsed",
            stacklevel=2,
        )
    return CnfFormula(num_vars, clauses)


def read_dimacs(path: str | Path) -> CnfFormula:
    return parse_dimacs(Path(path).read_bytes())


def write_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0" if clause else "0")
    return "\n".join(lines) + "\n"


def save_dimacs(formula: CnfFormula, path: str | Path) -> None:
    Path(path).write_text(write_dimacs(formula))


def evaluate(formula: CnfFormula, assignment: Mapping[int, int]) -> bool:
    """True iff the total ``assignment`` satisfies every clause."""
    for var in formula.variables():
        if var not in assignment:
            raise ValueError(f"assignment is partial: variable {var} unassigned")
    for clause in formula.clauses:
        if not any(bool(assignment[abs(lit)]) == (lit > 0) for lit in clause):
            return False
    return True


def dual_formula(
    formula: CnfFormula, backbone: Mapping[int, int]
) -> tuple[CnfFormula, BackboneLabeling]:
    """Flip the polarity of every occurrence of each backbone variable.

    Returns the transformed formula together with the negated labeling. When
    ``backbone`` is the exact backbone of a satisfiable input, the result is
    satisfiable and has the same backbone variables with opposite phases; the
    transform is an involution.
    """
    for var in backbone:
        if not 1 <= var <= formula.num_vars:
            raise ValueError(f"backbone variable {var} absent from formula")
    flip = set(backbone)
    clauses = [[-lit if abs(lit) in flip else lit for lit in clause] for clause in formula.clauses]
    labels = {var: 1 - (1 if phase else 0) for var, phase in backbone.items()}
    return CnfFormula(formula.num_vars, clauses), labels


@dataclass(frozen=True)
class Component:
    """One connected component: variable indices and clause indices."""

    vars: tuple[int, ...]
    clauses: tuple[int, ...]


def connected_components(formula: CnfFormula) -> list[Component]:
    """Partition variables and clauses into components linked by shared variables.

    Isolated variables form singleton components. Components are returned in
    discovery order: first appearance while scanning variables ascending, then
    clauses in file order (which only matters for variable-free clauses).
    """
    n, m = formula.num_vars, len(formula.clauses)
    parent = list(range(n + m))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for j, clause in enumerate(formula.clauses):
        for lit in clause:
            a, b = find(abs(lit) - 1), find(n + j)
            if a != b:
                parent[b] = a

    order: dict[int, int] = {}
    var_groups: dict[int, list[int]] = {}
    clause_groups: dict[int, list[int]] = {}
    for item in range(n + m):
        root = find(item)
        if root not in order:
            order[root] = len(order)
            var_groups[root] = []
            clause_groups[root] = []
        if item < n:
            var_groups[root].append(item + 1)
        else:
            clause_groups[root].append(item - n)

    roots = sorted(order, key=order.get)
    return [Component(tuple(var_groups[r]), tuple(clause_groups[r])) for r in roots]
