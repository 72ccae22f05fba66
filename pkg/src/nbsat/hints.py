"""Phase hints: per-variable predicted phase plus confidence, NBH 1 format.

An NBH file starts with the line ``NBH 1`` followed by one line per variable:
``<var> <phase> <confidence>`` with phase in {0,1} and confidence in [0,1].
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

PhaseHints = dict[int, tuple[int, float]]


class HintFormatError(ValueError):
    """Malformed NBH hint data."""


def parse_hints(text: str) -> PhaseHints:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "NBH 1":
        raise HintFormatError("expected 'NBH 1' header")
    hints: PhaseHints = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise HintFormatError(f"line {lineno}: expected '<var> <phase> <confidence>'")
        try:
            var, phase, conf = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise HintFormatError(f"line {lineno}: bad field in {line!r}") from exc
        if var < 1:
            raise HintFormatError(f"line {lineno}: variable index must be >= 1")
        if phase not in (0, 1):
            raise HintFormatError(f"line {lineno}: phase must be 0 or 1")
        if not 0.0 <= conf <= 1.0:
            raise HintFormatError(f"line {lineno}: confidence must lie in [0,1]")
        hints[var] = (phase, conf)
    return hints


def format_hints(hints: Mapping[int, tuple[int, float]]) -> str:
    lines = ["NBH 1"]
    for var in sorted(hints):
        phase, conf = hints[var]
        lines.append(f"{var} {phase} {conf:g}")
    return "\n".join(lines) + "\n"


def load_hints(path: str | Path) -> PhaseHints:
    return parse_hints(Path(path).read_text())


def save_hints(hints: Mapping[int, tuple[int, float]], path: str | Path) -> None:
    Path(path).write_text(format_hints(hints))


def hints_from_model(model: Mapping[int, int], confidence: float = 1.0) -> PhaseHints:
    """Turn a (usually satisfying) assignment into full-confidence hints."""
    return {var: (1 if phase else 0, confidence) for var, phase in model.items()}
