"""Shared fixtures: the totient-sieve oracle and the acceptance report.

The ground truth for preimage sets is a sieve bucketed by value: since
phi(m) >= sqrt(m/2), every preimage of n satisfies m <= 2*n**2, so a
sieve up to 2*B**2 is a complete oracle for every n <= B.
"""
from __future__ import annotations

import numpy as np
import pytest

from invphi.stats import phi_sieve


def bucket_preimages(limit: int) -> dict[int, list[int]]:
    """Map each totient value to the sorted list of m <= limit attaining it."""
    phi = phi_sieve(limit)
    order = np.argsort(phi[1:], kind="stable") + 1  # m ascending within ties
    keys = phi[order]
    uniq, starts = np.unique(keys, return_index=True)
    buckets: dict[int, list[int]] = {}
    for pos, val in enumerate(uniq):
        stop = starts[pos + 1] if pos + 1 < len(starts) else len(order)
        buckets[int(val)] = [int(m) for m in order[starts[pos]:stop]]
    return buckets


@pytest.fixture(scope="session")
def small_oracle() -> dict[int, list[int]]:
    """Complete preimage oracle for every n <= 316 (sieve to 2*316**2)."""
    return bucket_preimages(200_000)


# --- acceptance reporting ---------------------------------------------------
# test_acceptance.py pushes one line per criterion; the hook below reprints
# them after the run so the pass/FAIL summary is visible without -s.

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def criterion():
    """Record and assert one acceptance criterion outcome."""

    def check(number: str, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'pass' if ok else 'FAIL'} — {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
