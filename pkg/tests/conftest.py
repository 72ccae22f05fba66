import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nbsat.cnf import CnfFormula, parse_dimacs

PHI_TEXT = "p cnf 3 3\n1 -2 0\n2 3 0\n2 0\n"


@pytest.fixture
def phi() -> CnfFormula:
    """(v1 or not v2) and (v2 or v3) and (v2); backbone {v1: 1, v2: 1}."""
    return parse_dimacs(PHI_TEXT)


@pytest.fixture
def chain4() -> CnfFormula:
    """(v1 or v2) and (v2 or v3) and (v3 or v4): one long component."""
    return CnfFormula(4, [[1, 2], [2, 3], [3, 4]])
