"""Enumerate totient preimages.

Every m with phi(m) = n factors as a product of prime powers ell^(g+1),
one per distinct prime ell of m, and contributes ell^g * (ell - 1) to n.
So the preimages of n correspond one-to-one with the ways of writing n as
a product of such "units" over strictly increasing primes.  We index the
units by their value (a divisor of n) and run a depth-first search over
the remaining cofactor.  Work is polynomial in the number of search nodes
plus the divisor count, not in n.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from . import numcore
from .numcore import Factorization, divisors

__all__ = [
    "PreimageSet",
    "PrimePowerUnit",
    "SearchBudgetExceeded",
    "UnitIndex",
    "build_unit_index",
    "ensure_prime_table",
    "invert",
    "invert_value",
    "is_totient",
    "iter_representations",
    "psi_star_count",
    "verify_certificate",
]


class SearchBudgetExceeded(RuntimeError):
    """Search node cap hit; carries the count reached."""

    def __init__(self, nodes: int):
        super().__init__(f"node budget exceeded after {nodes} nodes")
        self.nodes = nodes


class PrimePowerUnit(NamedTuple):
    """One multiplicative building block: prime ell taken with multiplicity
    gamma + 1 in the preimage contributes ell^gamma * (ell - 1) to n."""

    ell: int
    gamma: int

    @property
    def unit_value(self) -> int:
        return self.ell**self.gamma * (self.ell - 1)

    @property
    def solution_factor(self) -> int:
        return self.ell ** (self.gamma + 1)


#: divisor of n -> the (at most two) units whose value equals it
UnitIndex = dict


# ---------------------------------------------------------------------------
# fast primality for small candidates
# ---------------------------------------------------------------------------
# The unit index probes is_prime(d + 1) for every divisor d; over a sweep
# that is tens of millions of probes, so small candidates go through a
# sieve table instead of Miller-Rabin.

_prime_table = bytearray()


def ensure_prime_table(limit: int) -> None:
    """Grow the shared primality lookup table to cover 0..limit."""
    global _prime_table
    if limit < len(_prime_table):
        return
    size = max(limit + 1, 1 << 16)
    table = bytearray([1]) * size
    table[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(size - 1) + 1):
        if table[p]:
            table[p * p :: p] = b"\x00" * len(range(p * p, size, p))
    _prime_table = table


def _is_prime_fast(x: int) -> bool:
    if x < len(_prime_table):
        return bool(_prime_table[x])
    return numcore.is_prime(x)


# ---------------------------------------------------------------------------
# unit index
# ---------------------------------------------------------------------------


def build_unit_index(f: Factorization, divs: list[int]) -> UnitIndex:
    """Map each divisor e of n to the units with value e.

    A unit (ell, gamma) has value ell^gamma * (ell - 1); it can appear in a
    representation of n only if that value divides n.  For each divisor w,
    ell = w + 1 prime starts a run of candidate units (ell, 0), (ell, 1), ...
    whose values are w, w*ell, w*ell^2, ... — kept while they divide n.
    """
    n = f.value
    index: UnitIndex = {e: () for e in divs}
    for e, units in _index_items(n, divs):
        index[e] = tuple(PrimePowerUnit(ell, _gamma_of(ell, factor)) for ell, factor in units)
    return index


def _gamma_of(ell: int, solution_factor: int) -> int:
    gamma = -1
    while solution_factor > 1:
        solution_factor //= ell
        gamma += 1
    return gamma


def _index_items(n: int, divs: list[int]) -> list:
    """Lean form of the unit index: sorted (e, ((ell, solution_factor), ...))
    for unit-bearing divisors only.  This is the search's hot path."""
    if not _prime_table:
        ensure_prime_table(1 << 16)
    table = _prime_table
    tlen = len(table)
    acc: dict[int, list] = {}
    for w in divs:
        ell = w + 1
        if (table[ell] if ell < tlen else numcore.is_prime(ell)) == 0:
            continue
        u, factor = w, ell
        while n % u == 0:
            if u in acc:
                acc[u].append((ell, factor))
            else:
                acc[u] = [(ell, factor)]
            u *= ell
            factor *= ell
    return sorted((e, tuple(us)) for e, us in acc.items())


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreimageSet:
    """Result of one inversion: the full solution set plus search counters.

    nodes_explored counts every search state visited (the root included);
    on a full traversal it equals the size of the union of preimage sets
    over all divisors of n.  paths_explored counts completed
    representations, i.e. solutions before dedup (the map representation ->
    solution is injective, so it always matches len(solutions)).
    """

    n: int
    solutions: tuple[int, ...]
    nodes_explored: int
    paths_explored: int

    def as_record(self) -> dict:
        return {
            "n": self.n,
            "solutions": list(self.solutions),
            "nodes_explored": self.nodes_explored,
            "paths_explored": self.paths_explored,
        }


class _FoundOne(Exception):
    pass


def _explore(n: int, items: list, first_only: bool, max_nodes: int | None):
    """DFS over unit choices with strictly increasing primes.

    Children are visited with the unit value ascending and units per value
    in (ell, gamma) order, so counters are deterministic.
    """
    solutions: list[int] = []
    state = [0, 0]  # nodes, paths

    def walk(rem: int, last_ell: int, acc: int) -> None:
        state[0] += 1
        if max_nodes is not None and state[0] > max_nodes:
            raise SearchBudgetExceeded(state[0])
        if rem == 1:
            state[1] += 1
            solutions.append(acc)
            if first_only:
                raise _FoundOne
        for e, units in items:
            if e > rem:
                break
            if rem % e:
                continue
            nrem = rem // e
            for ell, factor in units:
                if ell > last_ell:
                    walk(nrem, ell, acc * factor)

    try:
        walk(n, 0, 1)
    except _FoundOne:
        pass
    return solutions, state[0], state[1]


def invert(
    f: Factorization,
    *,
    odd_shortcut: bool = True,
    max_nodes: int | None = None,
) -> PreimageSet:
    """All m with phi(m) = n, given n's factorization.

    odd_shortcut skips the search for odd n > 1 (phi is even on m >= 3, and
    1, 2 are the only preimages of 1); the result is identical, only the
    counters then reflect that no work was done.  max_nodes aborts the
    search with SearchBudgetExceeded once nodes_explored passes the cap.
    """
    n = f.value
    if odd_shortcut and n > 1 and n % 2 == 1:
        return PreimageSet(n, (), 0, 0)
    items = _index_items(n, divisors(f))
    solutions, nodes, paths = _explore(n, items, False, max_nodes)
    return PreimageSet(n, tuple(sorted(solutions)), nodes, paths)


def invert_value(n: int, *, seed: int = numcore.DEFAULT_SEED, **kwargs) -> PreimageSet:
    """invert() for a plain integer; factors n first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return invert(numcore.factorize(n, seed=seed), **kwargs)


def is_totient(f: Factorization, *, max_nodes: int | None = None) -> bool:
    """Does n = value(f) have any totient preimage?

    Stops at the first representation found.  Odd n > 1 are rejected
    outright (sound, not just a heuristic).
    """
    n = f.value
    if n == 1:
        return True
    if n % 2 == 1:
        return False
    items = _index_items(n, divisors(f))
    solutions, _, _ = _explore(n, items, True, max_nodes)
    return bool(solutions)


def psi_star_count(f: Factorization) -> int:
    """Size of the union of preimage sets over all divisors of n.

    The per-divisor sets are disjoint (phi is a function), so this is the
    plain sum of the per-divisor counts.
    """
    total = 0
    primes = [p for p, _ in f.entries]
    ranges = [range(a + 1) for _, a in f.entries]
    for exps in itertools.product(*ranges):
        sub = Factorization(tuple((p, e) for p, e in zip(primes, exps) if e))
        total += len(invert(sub).solutions)
    return total


def verify_certificate(n: int, preimage: Factorization) -> bool:
    """Check a claimed preimage: valid factorization and phi(preimage) == n.

    Returns False (never raises) on malformed certificates.
    """
    try:
        if n < 1:
            return False
        if not preimage.is_valid():
            return False
        return numcore.euler_phi(preimage) == n
    except (TypeError, AttributeError):
        return False


def iter_representations(f: Factorization) -> Iterator[tuple[PrimePowerUnit, ...]]:
    """Yield every representation of n as a unit product (test/debug view).

    Each yielded tuple multiplies out to n with strictly increasing primes;
    the corresponding preimage is the product of the solution factors.
    """
    divs = divisors(f)
    index = build_unit_index(f, divs)
    items = [(e, index[e]) for e in divs if index[e]]
    n = f.value

    def walk(rem: int, last_ell: int, chosen: tuple) -> Iterator[tuple]:
        if rem == 1:
            yield chosen
        for e, units in items:
            if e > rem:
                break
            if rem % e:
                continue
            for u in units:
                if u.ell > last_ell:
                    yield from walk(rem // e, u.ell, chosen + (u,))

    yield from walk(n, 0, ())
