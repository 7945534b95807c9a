"""Factoring a semiprime by inverting the totient at a padded multiple.

For n = p*q (distinct odd primes) and random odd multipliers a = 2*k1 + 1,
b = 2*k2 + 1, the preimage set of N' = 4*a*b*n contains
m = (2*a*p + 1) * (2*b*q + 1) whenever both factors happen to be prime —
and from that m the pair (p, q) falls out by solving a quadratic.  The
demo loops: draw (k1, k2), invert N', scan the preimages for a recoverable
m, repeat until the lucky draw arrives.

IMPORTANT CAVEAT — this is a logic demonstration, not a speedup.  The
loop's totient inversions run on this package's inverter, which factors
its input internally; a hypothetical factorization-free inverter is what
would make the reduction consequential, and none exists here.  What the
demo shows is the recovery step: a structured preimage of N' surrenders
the factors of n.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Union

from . import inverter
from .numcore import (
    DEFAULT_SEED,
    Factorization,
    FactorBudgetError,
    factorize,
    is_prime,
)

__all__ = [
    "SemiprimeInstance",
    "OracleBudget",
    "Target",
    "FactoringResult",
    "FactoringFailure",
    "sample_k_pair",
    "target",
    "recover_factors",
    "factor_via_inversion",
]


# --- instances ------------------------------------------------------------

@dataclass(frozen=True)
class SemiprimeInstance:
    """A product of two distinct odd primes, with the factors kept aside.

    The hidden factors exist for test assertions and instance generation;
    nothing in the demo loop reads them.
    """

    n: int
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p == self.q:
            raise ValueError("factors must be distinct")
        if self.p % 2 == 0 or self.q % 2 == 0:
            raise ValueError("factors must be odd")
        if not (is_prime(self.p) and is_prime(self.q)):
            raise ValueError("factors must be prime")
        if self.n != self.p * self.q:
            raise ValueError("n is not the product of the given factors")

    @classmethod
    def from_primes(cls, p: int, q: int) -> "SemiprimeInstance":
        return cls(p * q, p, q)

    @classmethod
    def from_value(cls, n: int, *, seed: int = DEFAULT_SEED) -> "SemiprimeInstance":
        """Build from a bare value, factoring it (desk scale only)."""
        f = factorize(n, seed=seed)
        if len(f.entries) != 2 or any(e != 1 for _, e in f.entries):
            raise ValueError(f"{n} is not a product of two distinct primes")
        (p, _), (q, _) = f.entries
        return cls(n, p, q)

    @classmethod
    def random_semiprime(cls, bits: int, seed: int = DEFAULT_SEED) -> "SemiprimeInstance":
        """Random instance with two distinct primes of exactly `bits` bits."""
        if bits < 3:
            raise ValueError("need at least 3 bits for distinct odd primes")
        rng = random.Random(seed)

        def draw() -> int:
            while True:
                candidate = rng.randrange(1 << (bits - 1), 1 << bits) | 1
                if is_prime(candidate):
                    return candidate

        p = draw()
        q = draw()
        while q == p:
            q = draw()
        return cls.from_primes(p, q)


@dataclass(frozen=True)
class OracleBudget:
    """Resource limits for the demo loop.

    `k_bound` defaults (None) to n**3, the analysis-friendly range; any
    smaller range keeps recovery correct and makes desk demos much faster.
    `node_cap` aborts any single inversion whose search tree outgrows it,
    standing in for an abstract per-call timeout.  `tau_filter` optionally
    rejects multipliers 2k+1 with more than ln(n)**3 divisors; the default
    leaves it off, as it only matters for counting arguments.
    """

    max_samples: int = 100_000
    node_cap: int = 1_000_000
    k_bound: Optional[int] = None
    tau_filter: bool = False

    def __post_init__(self) -> None:
        if self.max_samples < 1 or self.node_cap < 1:
            raise ValueError("budgets must be positive")
        if self.k_bound is not None and self.k_bound < 1:
            raise ValueError("k_bound must be positive when given")

    def k_range(self, n: int) -> int:
        return self.k_bound if self.k_bound is not None else n ** 3


# --- the sampling and recovery steps ---------------------------------------

def sample_k_pair(n: int, budget: OracleBudget,
                  seed: Union[int, random.Random] = DEFAULT_SEED) -> tuple[int, int]:
    """Uniform independent pair (k1, k2) in [1, budget.k_range(n)].

    Accepts a Random instance so a caller's loop draws a reproducible
    sequence from one seed.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    bound = budget.k_range(n)
    return rng.randint(1, bound), rng.randint(1, bound)


@dataclass(frozen=True)
class Target:
    """The padded totient target N' = 4 * (2*k1+1) * (2*k2+1) * n.

    `prefactor` covers the constructed part 4*(2*k1+1)*(2*k2+1); in desk
    mode `factorization` extends it over n as well (the demo's inverter
    needs the full factorization), while genuine mode leaves n an opaque
    cofactor and `factorization` None.
    """

    value: int
    k1: int
    k2: int
    cofactor: int
    prefactor: Factorization
    factorization: Optional[Factorization]


def _merge_factorizations(*parts: Factorization) -> Factorization:
    exponents: dict[int, int] = {}
    for part in parts:
        for prime, exp in part.entries:
            exponents[prime] = exponents.get(prime, 0) + exp
    return Factorization(tuple(sorted(exponents.items())))


def target(n: int, k1: int, k2: int, *, mode: str = "desk",
           seed: int = DEFAULT_SEED) -> Target:
    """Build N' = 4*(2*k1+1)*(2*k2+1)*n with as much factorization as the
    mode allows.  Factoring work beyond numcore's budget surfaces as
    FactorBudgetError — callers treat it as "resample".
    """
    if mode not in ("desk", "genuine"):
        raise ValueError(f"unknown mode {mode!r}")
    a = 2 * k1 + 1
    b = 2 * k2 + 1
    value = 4 * a * b * n
    prefactor = _merge_factorizations(
        Factorization(((2, 2),)), factorize(a, seed=seed), factorize(b, seed=seed)
    )
    full = None
    if mode == "desk":
        full = _merge_factorizations(prefactor, factorize(n, seed=seed))
    return Target(value=value, k1=k1, k2=k2, cofactor=n,
                  prefactor=prefactor, factorization=full)


def recover_factors(m: int, n: int, k1: int, k2: int) -> Optional[tuple[int, int]]:
    """Extract (p, q) from a preimage of the (2ap+1)(2bq+1) shape, if m has it.

    With a = 2*k1+1 and b = 2*k2+1, a structured preimage satisfies
    m = (2ap+1)(2bq+1), so z1 = ap and z2 = bq are the integer roots of
    z**2 - s*z + a*b*n with s = (m - 1 - 4abn)/2.  Returns None unless the
    roots exist, divide out cleanly (either assignment), and the resulting
    pair multiplies back to n with both members prime.
    """
    a = 2 * k1 + 1
    b = 2 * k2 + 1
    twice_s = m - 1 - 4 * a * b * n
    if twice_s <= 0 or twice_s % 2 != 0:
        return None
    s = twice_s // 2
    discriminant = s * s - 4 * a * b * n
    if discriminant < 0:
        return None
    root = math.isqrt(discriminant)
    if root * root != discriminant or (s - root) % 2 != 0:
        return None
    z1 = (s - root) // 2
    z2 = (s + root) // 2
    for za, zb in ((z1, z2), (z2, z1)):
        if za <= 0 or zb <= 0 or za % a != 0 or zb % b != 0:
            continue
        p = za // a
        q = zb // b
        if p * q == n and is_prime(p) and is_prime(q):
            return p, q
    return None


# --- the demo loop ----------------------------------------------------------

@dataclass(frozen=True)
class FactoringResult:
    p: int
    q: int
    samples_used: int
    k1: int
    k2: int
    preimage: int
    target_value: int


class FactoringFailure(RuntimeError):
    """The sample budget ran out without a recoverable preimage."""

    def __init__(self, n: int, samples: int) -> None:
        super().__init__(
            f"no recoverable preimage for n={n} within {samples} samples; "
            f"retry with a fresh seed or a larger budget"
        )
        self.n = n
        self.samples = samples


def factor_via_inversion(inst: SemiprimeInstance,
                         budget: Optional[OracleBudget] = None,
                         seed: int = DEFAULT_SEED) -> FactoringResult:
    """Factor inst.n by repeated totient inversion of padded targets.

    Each round draws (k1, k2), inverts N' = 4*(2k1+1)*(2k2+1)*n (abandoning
    any inversion whose node count passes budget.node_cap), and scans the
    preimages through recover_factors.  Returns on the first success;
    raises FactoringFailure when max_samples rounds all miss.
    """
    budget = budget or OracleBudget()
    rng = random.Random(seed)
    n = inst.n
    tau_ceiling = math.log(n) ** 3 if budget.tau_filter else None

    for round_idx in range(1, budget.max_samples + 1):
        k1, k2 = sample_k_pair(n, budget, rng)
        try:
            if tau_ceiling is not None:
                if (factorize(2 * k1 + 1, seed=seed).tau > tau_ceiling
                        or factorize(2 * k2 + 1, seed=seed).tau > tau_ceiling):
                    continue
            tgt = target(n, k1, k2, seed=seed)
        except FactorBudgetError:
            continue
        try:
            preimages = inverter.invert(tgt.factorization, max_nodes=budget.node_cap)
        except inverter.SearchBudgetExceeded:
            continue
        for m in preimages.solutions:
            found = recover_factors(m, n, k1, k2)
            if found is not None:
                return FactoringResult(
                    p=found[0], q=found[1], samples_used=round_idx,
                    k1=k1, k2=k2, preimage=m, target_value=tgt.value,
                )
    raise FactoringFailure(n, budget.max_samples)
