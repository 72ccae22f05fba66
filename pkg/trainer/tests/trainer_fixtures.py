"""Shared fixture text and subprocess helpers for the trainer tests."""

import subprocess

PHI_NBG = """NBG 1
h 7 8 3 3 1
n 0 1
n 1 1
n 2 1
n 3 -1
n 4 -1
n 5 -1
n 6 0
e 0 3 1
e 1 3 -1
e 1 4 1
e 2 4 1
e 1 5 1
e 6 3 0
e 6 4 0
e 6 5 0
l 0 1
l 1 1
"""

UNIT_NBG = "NBG 1\nh 3 2 1 1 1\nn 0 1\nn 1 -1\nn 2 0\ne 0 1 1\ne 2 1 0\n"


def run_cli(*argv: str) -> subprocess.CompletedProcess:
    proc = subprocess.run(list(argv), capture_output=True, text=True)
    assert proc.returncode == 0, f"{argv} failed:\n{proc.stdout}\n{proc.stderr}"
    return proc
