"""Integer primitives shared by the rest of the package.

Naturals are plain Python ints (arbitrary precision).  The heavy modular
arithmetic rides on gmpy2; everything else is stdlib.  All randomized
routines take an explicit seed and are deterministic for a fixed seed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator

import gmpy2

__all__ = [
    "DEFAULT_SEED",
    "FactorBudgetError",
    "Factorization",
    "crt_combine",
    "divisors",
    "euler_phi",
    "factorize",
    "format_factorization",
    "is_prime",
    "parse_factorization",
    "small_primes",
]

DEFAULT_SEED = 0x5EED

# ---------------------------------------------------------------------------
# small primes
# ---------------------------------------------------------------------------


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(range(p * p, limit + 1, p))
    return [i for i in range(limit + 1) if flags[i]]


_SMALL_PRIMES: tuple[int, ...] = tuple(_sieve(1000))
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)


def small_primes(bound: int) -> list[int]:
    """All primes <= bound (fresh list; sieved on demand)."""
    if bound <= _SMALL_PRIMES[-1]:
        return [p for p in _SMALL_PRIMES if p <= bound]
    return _sieve(bound)


# ---------------------------------------------------------------------------
# primality
# ---------------------------------------------------------------------------

# The fixed witness set below is deterministic for everything under
# 3_317_044_064_679_887_385_961_981 (> 2**64).  Larger inputs get 64
# strong-probable-prime rounds (composite escape probability < 4**-64)
# plus a strong Lucas-Selfridge check, BPSW style.
_MR_FIXED_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_FIXED_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_RANDOM_ROUNDS = 64
_MR_BASE_SALT = 0x9E3779B97F4A7C15


def _strong_probable_prime(n: "gmpy2.mpz", d: "gmpy2.mpz", s: int, base: int) -> bool:
    x = gmpy2.powmod(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = (x * x) % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test: deterministic Miller-Rabin below the fixed-base
    threshold, Miller-Rabin + strong Lucas above it.

    Deterministic for a given n (the extra-round bases are derived from n).
    """
    if n < 2:
        return False
    if n in _SMALL_PRIME_SET:
        return True
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return False
    nz = gmpy2.mpz(n)
    d = nz - 1
    s = 0
    while d % 2 == 0:
        d >>= 1
        s += 1
    if n < _MR_FIXED_LIMIT:
        bases: Iterator[int] | tuple[int, ...] = _MR_FIXED_BASES
    else:
        rng = random.Random(n ^ _MR_BASE_SALT)
        bases = (rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS))
    for a in bases:
        if not _strong_probable_prime(nz, d, s, a):
            return False
    if n >= _MR_FIXED_LIMIT and not gmpy2.is_strong_selfridge_prp(nz):
        return False
    return True


# ---------------------------------------------------------------------------
# factorization type and text format
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes strictly
    increasing, exponents >= 1.  The empty tuple represents 1."""

    entries: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        v = 1
        for p, a in self.entries:
            v *= p**a
        return v

    @property
    def tau(self) -> int:
        """Number of divisors."""
        t = 1
        for _, a in self.entries:
            t *= a + 1
        return t

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        return format_factorization(self)

    def is_valid(self) -> bool:
        """Structural + primality check (ascending primes, exponents >= 1)."""
        last = 1
        for item in self.entries:
            if not (isinstance(item, tuple) and len(item) == 2):
                return False
            p, a = item
            if not (isinstance(p, int) and isinstance(a, int)):
                return False
            if p <= last or a < 1:
                return False
            if not is_prime(p):
                return False
            last = p
        return True

    @classmethod
    def parse(cls, text: str) -> "Factorization":
        return parse_factorization(text)


def format_factorization(f: Factorization) -> str:
    """Render as ``p1^a1 * p2^a2 * ...`` with ``^1`` omitted; ``1`` if empty."""
    if not f.entries:
        return "1"
    parts = []
    for p, a in f.entries:
        parts.append(f"{p}^{a}" if a > 1 else f"{p}")
    return " * ".join(parts)


def parse_factorization(text: str) -> Factorization:
    """Inverse of :func:`format_factorization`.

    Accepts flexible whitespace around ``*``.  Raises ValueError on
    malformed input (bad syntax, non-prime base, non-ascending primes,
    exponent < 1).
    """
    s = text.strip()
    if not s:
        raise ValueError("empty factorization string")
    if s == "1":
        return Factorization(())
    entries = []
    for term in s.split("*"):
        term = term.strip()
        if not term:
            raise ValueError(f"empty term in {text!r}")
        base_s, _, exp_s = term.partition("^")
        try:
            p = int(base_s)
            a = int(exp_s) if exp_s else 1
        except ValueError:
            raise ValueError(f"bad term {term!r} in {text!r}") from None
        entries.append((p, a))
    f = Factorization(tuple(entries))
    if not f.is_valid():
        raise ValueError(f"not a valid factorization: {text!r}")
    return f


# ---------------------------------------------------------------------------
# factoring
# ---------------------------------------------------------------------------


class FactorBudgetError(RuntimeError):
    """Raised when factorize() hits its work cap before finishing."""


_FACTOR_WORK_CAP = 1 << 22  # total rho iterations per factorize() call


def _brent_rho(n: int, rng: random.Random, budget: list[int]) -> int:
    """One nontrivial factor of composite n via Brent's cycle variant.

    Decrements budget[0] per iteration; raises FactorBudgetError when spent.
    """
    nz = gmpy2.mpz(n)
    while True:
        y = gmpy2.mpz(rng.randrange(1, n))
        c = gmpy2.mpz(rng.randrange(1, n))
        m = 128
        g = r = q = gmpy2.mpz(1)
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % nz
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % nz
                    q = (q * abs(x - y)) % nz
                g = gmpy2.gcd(q, nz)
                k += m
                budget[0] -= m
                if budget[0] <= 0:
                    raise FactorBudgetError(f"work cap exhausted factoring {n}")
            r *= 2
        if g == nz:  # backtrack
            g = gmpy2.mpz(1)
            while g == 1:
                ys = (ys * ys + c) % nz
                g = gmpy2.gcd(abs(x - ys), nz)
                budget[0] -= 1
                if budget[0] <= 0:
                    raise FactorBudgetError(f"work cap exhausted factoring {n}")
        if g != nz:
            return int(g)
        # rare cycle degenerate: retry with a fresh polynomial


def _perfect_power(n: int) -> tuple[int, int] | None:
    """(root, k) with root**k == n and k >= 2, or None."""
    for k in range(2, n.bit_length() + 1):
        root, exact = gmpy2.iroot(gmpy2.mpz(n), k)
        if exact:
            return int(root), k
        if root < 2:
            break
    return None


def factorize(n: int, *, seed: int = DEFAULT_SEED, work_cap: int = _FACTOR_WORK_CAP) -> Factorization:
    """Full prime factorization of n >= 1.

    Trial division by the primes below 1000, then recursive splitting with
    Brent's rho (seeded, deterministic).  Raises FactorBudgetError if the
    rho work cap is exhausted first.
    """
    if n < 1:
        raise ValueError("factorize() needs n >= 1")
    counts: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    budget = [work_cap]
    rng = random.Random(seed ^ (n & 0xFFFFFFFFFFFFFFFF))
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < _SMALL_PRIMES[-1] ** 2 or is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        power = _perfect_power(m)
        if power is not None:
            root, k = power
            stack.extend([root] * k)
            continue
        d = _brent_rho(m, rng, budget)
        stack.append(d)
        stack.append(m // d)
    return Factorization(tuple(sorted(counts.items())))


# ---------------------------------------------------------------------------
# divisors, phi, CRT
# ---------------------------------------------------------------------------

#: Strictly increasing list of all divisors.
DivisorSet = list


def divisors(f: Factorization) -> list[int]:
    """All divisors of the factored value, strictly increasing."""
    divs = [1]
    for p, a in f.entries:
        grown = []
        pe = 1
        for _ in range(a):
            pe *= p
            grown.extend(d * pe for d in divs)
        divs.extend(grown)
    divs.sort()
    return divs


def euler_phi(f: Factorization) -> int:
    """Euler's totient of the factored value."""
    phi = 1
    for p, a in f.entries:
        phi *= p ** (a - 1) * (p - 1)
    return phi


def crt_combine(pairs: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences x = r_i (mod m_i), pairwise-coprime moduli.

    Returns (x, M) with 0 <= x < M = prod(m_i).  ValueError if any moduli
    share a factor.  The empty system yields (0, 1).
    """
    x, mod = 0, 1
    for r, m in pairs:
        if m < 1:
            raise ValueError(f"modulus {m} < 1")
        g = math.gcd(mod, m)
        if g != 1:
            raise ValueError(f"moduli not coprime (shared factor {g})")
        # lift x to the combined modulus
        inv = pow(mod % m, -1, m) if m > 1 else 0
        x = x + mod * ((r - x) * inv % m)
        mod *= m
        x %= mod
    return x, mod
