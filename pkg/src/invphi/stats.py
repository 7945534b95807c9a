"""Average-case behaviour of the preimage search over 1..x.

The per-n preimage counts here come from the inverter itself, not from a
totient sieve — a sieve would have to reach 2x^2 to see every preimage of
every n <= x, which is exactly what the search avoids.  The totient sieve
(phi_sieve) exists as an independent oracle for cross-checks at small x.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import inverter
from .numcore import Factorization

__all__ = [
    "DENSITY_LIMIT",
    "Survey",
    "SweepReport",
    "SweepRow",
    "phi_sieve",
    "psi_star_sum",
    "runtime_profile",
    "survey",
    "sweep",
    "tau_sum",
    "totient_density",
]

#: zeta(2) * zeta(3) / zeta(6) — the limit of totient_density(x) as x grows.
DENSITY_LIMIT = 1.9435964368207592


# ---------------------------------------------------------------------------
# sieves
# ---------------------------------------------------------------------------


def phi_sieve(limit: int) -> np.ndarray:
    """Totient of every m in 0..limit (phi[0] = 0), by the classic sieve.

    Independent of the inverter; used as the brute-force oracle in tests.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    phi = np.arange(limit + 1, dtype=np.int32)
    for p in range(2, limit + 1):
        if phi[p] == p:  # untouched so far -> p prime
            phi[p::p] -= phi[p::p] // p
    phi[0] = 0
    return phi


def _spf_sieve(limit: int) -> np.ndarray:
    """Smallest prime factor for 0..limit (spf[p] = p for primes, spf[1] = 1)."""
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[2::2] = 2
    for p in range(3, math.isqrt(limit) + 1, 2):
        if spf[p] == 0:
            block = spf[p * p :: 2 * p]
            block[block == 0] = p
    untouched = spf == 0
    spf[untouched] = np.arange(limit + 1, dtype=np.int32)[untouched]
    spf[1] = 1
    return spf


def tau_sum(x: int) -> int:
    """Exact sum of the divisor counts of 1..x (hyperbola form of the
    divisor-count sieve: sum of floor(x/d) counted once per lattice side)."""
    if x < 1:
        raise ValueError("x must be >= 1")
    r = math.isqrt(x)
    return 2 * sum(x // d for d in range(1, r + 1)) - r * r


# ---------------------------------------------------------------------------
# survey: run the inverter over every n <= limit once
# ---------------------------------------------------------------------------


@dataclass
class Survey:
    """Per-n inverter outputs for 1..limit: preimage counts and node counts."""

    limit: int
    psi: np.ndarray  # psi[n] = number of preimages of n (int32)
    nodes: np.ndarray  # nodes[n] = nodes_explored of invert(n) (int64)
    odd_shortcut: bool = True


def _factor_from_spf(n: int, spf: np.ndarray) -> Factorization:
    entries = []
    while n > 1:
        p = int(spf[n])
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        entries.append((p, a))
    return Factorization(tuple(entries))


def _survey_range(lo: int, hi: int, spf: np.ndarray, psi: np.ndarray,
                  nodes: np.ndarray, odd_shortcut: bool) -> None:
    """Fill psi[n], nodes[n] for lo <= n <= hi (inclusive)."""
    invert = inverter.invert
    for n in range(lo, hi + 1):
        res = invert(_factor_from_spf(n, spf), odd_shortcut=odd_shortcut)
        psi[n] = len(res.solutions)
        nodes[n] = res.nodes_explored


def survey(limit: int, *, odd_shortcut: bool = True) -> Survey:
    """Invert every n <= limit, collecting counts for the statistics below."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    inverter.ensure_prime_table(limit + 2)
    spf = _spf_sieve(limit)
    psi = np.zeros(limit + 1, dtype=np.int32)
    nodes = np.zeros(limit + 1, dtype=np.int64)
    _survey_range(1, limit, spf, psi, nodes, odd_shortcut)
    return Survey(limit, psi, nodes, odd_shortcut)


# ---------------------------------------------------------------------------
# the statistics
# ---------------------------------------------------------------------------


def _need_survey(x: int, data: Survey | None) -> Survey:
    if data is None:
        return survey(x)
    if data.limit < x:
        raise ValueError(f"survey covers 1..{data.limit}, need {x}")
    return data


def totient_density(x: int, *, data: Survey | None = None) -> float:
    """Average number of preimages per value: (sum of psi(d), d <= x) / x.

    Converges to DENSITY_LIMIT = zeta(2)*zeta(3)/zeta(6) ~ 1.9436.
    """
    data = _need_survey(x, data)
    return float(data.psi[1 : x + 1].sum(dtype=np.int64)) / x


def psi_star_sum(x: int, *, data: Survey | None = None) -> int:
    """Sum over n <= x of the number of preimages over all divisors of n.

    Computed through the divisor identity: sum_{d<=x} psi(d) * floor(x/d);
    every d counts once for each multiple n <= x.
    """
    data = _need_survey(x, data)
    d = np.arange(1, x + 1, dtype=np.int64)
    return int((data.psi[1 : x + 1].astype(np.int64) * (x // d)).sum())


def runtime_profile(x: int, threshold_exponent: float = 4.0, *,
                    data: Survey | None = None) -> float:
    """Fraction of n <= x whose search explored more than (ln n)^B nodes.

    B = threshold_exponent.  With B = 0 every searched n counts (every
    search visits at least the root and one child); large B leaves only
    the n <= e where the threshold degenerates.
    """
    if x < 100:
        raise ValueError("x must be >= 100")
    data = _need_survey(x, data)
    thresholds = np.log(np.arange(1, x + 1, dtype=np.float64)) ** threshold_exponent
    return float((data.nodes[1 : x + 1] > thresholds).mean())


# ---------------------------------------------------------------------------
# sweep report
# ---------------------------------------------------------------------------

_CSV_HEADER = "x,sum_psi,sum_psi_star,sum_tau,max_psi,slow_fraction,wall_ms"


@dataclass(frozen=True)
class SweepRow:
    x: int
    sum_psi: int
    sum_psi_star: int
    sum_tau: int
    max_psi: int
    slow_fraction: float
    wall_ms: int


@dataclass
class SweepReport:
    """Per-decade sweep rows.  Everything but wall_ms is deterministic."""

    limit: int
    threshold_exponent: float
    rows: list[SweepRow] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = [_CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.x},{r.sum_psi},{r.sum_psi_star},{r.sum_tau},"
                f"{r.max_psi},{r.slow_fraction:.6f},{r.wall_ms}"
            )
        return "\n".join(lines) + "\n"


def _row_boundaries(limit: int) -> list[int]:
    bounds = []
    x = 10
    while x <= limit:
        bounds.append(x)
        x *= 10
    if not bounds or bounds[-1] != limit:
        bounds.append(limit)
    return bounds


def sweep(limit: int, *, threshold_exponent: float = 4.0,
          odd_shortcut: bool = True) -> SweepReport:
    """Survey 1..limit and aggregate one row per decade (plus a final row
    at limit when it is not a power of ten)."""
    if limit < 10:
        raise ValueError("limit must be >= 10")
    inverter.ensure_prime_table(limit + 2)
    spf = _spf_sieve(limit)
    psi = np.zeros(limit + 1, dtype=np.int32)
    nodes = np.zeros(limit + 1, dtype=np.int64)
    report = SweepReport(limit, threshold_exponent)
    data = Survey(limit, psi, nodes, odd_shortcut)
    prev = 0
    for bound in _row_boundaries(limit):
        t0 = time.perf_counter()
        _survey_range(prev + 1, bound, spf, psi, nodes, odd_shortcut)
        prev = bound
        row = SweepRow(
            x=bound,
            sum_psi=int(psi[1 : bound + 1].sum(dtype=np.int64)),
            sum_psi_star=psi_star_sum(bound, data=data),
            sum_tau=tau_sum(bound),
            max_psi=int(psi[1 : bound + 1].max()),
            slow_fraction=runtime_profile(bound, threshold_exponent, data=data)
            if bound >= 100
            else float(
                (nodes[1 : bound + 1]
                 > np.log(np.arange(1, bound + 1, dtype=np.float64))
                 ** threshold_exponent).mean()
            ),
            wall_ms=int((time.perf_counter() - t0) * 1000),
        )
        report.rows.append(row)
    return report
