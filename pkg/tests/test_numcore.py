"""Integer primitives: primality, factoring, divisors, CRT, text format."""
from __future__ import annotations

import math
import random

import pytest
import sympy

from invphi.numcore import (
    DEFAULT_SEED,
    FactorBudgetError,
    Factorization,
    crt_combine,
    divisors,
    euler_phi,
    factorize,
    format_factorization,
    is_prime,
    parse_factorization,
    small_primes,
)

# --- primality --------------------------------------------------------------


def test_is_prime_matches_sympy_small():
    for n in range(10_000):
        assert is_prime(n) == sympy.isprime(n), n


def test_is_prime_matches_sympy_random_words():
    rng = random.Random(0xC0FFEE)
    for bits in (32, 48, 64, 80, 128):
        for _ in range(300):
            n = rng.getrandbits(bits) | 1
            assert is_prime(n) == sympy.isprime(n), n


def test_is_prime_known_hard_composites():
    # Carmichael numbers and base-2 strong pseudoprimes.
    for n in (561, 1105, 1729, 2047, 3277, 4033, 41041, 825265, 321197185,
              3215031751, 3825123056546413051):
        assert not is_prime(n), n


def test_is_prime_large_primes():
    assert is_prime(2**89 - 1)
    assert is_prime(2**107 - 1)
    assert is_prime(2**255 - 19)
    assert not is_prime(2**67 - 1)  # = 193707721 * 761838257287


def test_small_primes_both_paths():
    assert small_primes(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    for bound in (997, 5000):  # cached-table path and fresh-sieve path
        assert small_primes(bound) == list(sympy.primerange(2, bound + 1))


# --- factorize --------------------------------------------------------------


def test_factorize_small_exhaustive():
    for n in range(1, 2000):
        f = factorize(n)
        assert f.value == n
        assert f.is_valid()
        assert dict(f.entries) == sympy.factorint(n)


def test_factorize_random_and_structured():
    rng = random.Random(0xFAC7)
    cases = [2**20, 3**10, 10**9, 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23,
             (2**31 - 1) ** 2]
    cases += [rng.randrange(2, 10**12) for _ in range(60)]
    for n in cases:
        f = factorize(n)
        assert f.value == n and f.is_valid(), n


def test_factorize_semiprime_and_edge():
    p = int(sympy.nextprime(2**30))
    q = int(sympy.nextprime(2**31))
    f = factorize(p * q)
    assert f.entries == ((p, 1), (q, 1))
    assert factorize(1).entries == ()
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_budget_error():
    p = int(sympy.nextprime(2**40))
    q = int(sympy.nextprime(2**41))
    with pytest.raises(FactorBudgetError):
        factorize(p * q, work_cap=8)


def test_factorize_deterministic():
    n = 2**59 - 1  # 179951 * 3203431780337
    assert factorize(n, seed=DEFAULT_SEED) == factorize(n, seed=DEFAULT_SEED)


# --- factorization text format ----------------------------------------------


def test_format_spot_values():
    assert str(factorize(540)) == "2^2 * 3^3 * 5"
    assert str(factorize(30)) == "2 * 3 * 5"
    assert str(factorize(1)) == "1"
    assert format_factorization(Factorization(((19, 1), (31, 1)))) == "19 * 31"


def test_parse_format_roundtrip():
    rng = random.Random(0x7E57)
    pool = small_primes(200)
    for _ in range(200):
        picks = sorted(rng.sample(pool, rng.randint(0, 5)))
        f = Factorization(tuple((p, rng.randint(1, 6)) for p in picks))
        assert parse_factorization(format_factorization(f)) == f
    assert parse_factorization("1") == Factorization(())
    assert parse_factorization("  2^3   *  7 ") == Factorization(((2, 3), (7, 1)))


def test_parse_rejects_malformed():
    bad = ["", "   ", "0", "4", "6^2", "3 * 2", "2^0", "5 *", "* 5",
           "2 ^ 3 junk", "x", "2^-1", "7 * 7"]
    for text in bad:
        with pytest.raises(ValueError):
            parse_factorization(text)


def test_tau_and_value():
    f = factorize(360)  # 2^3 * 3^2 * 5
    assert f.tau == 24
    assert f.value == 360
    assert Factorization(()).tau == 1


# --- divisors / phi ----------------------------------------------------------


def test_divisors_against_brute_force():
    for n in range(1, 400):
        expected = [d for d in range(1, n + 1) if n % d == 0]
        assert divisors(factorize(n)) == expected


def test_euler_phi_against_sympy():
    for n in range(1, 3000):
        assert euler_phi(factorize(n)) == sympy.totient(n)
    assert euler_phi(Factorization(())) == 1


# --- crt_combine --------------------------------------------------------------


def test_crt_spot_and_brute_force():
    x, m = crt_combine([(2, 3), (3, 5), (2, 7)])
    assert (x, m) == (23, 105)
    rng = random.Random(0xC47)
    pool = [3, 5, 7, 8, 11, 13]
    for _ in range(100):
        mods = rng.sample(pool, rng.randint(1, 4))
        pairs = [(rng.randrange(m), m) for m in mods]
        x, big = crt_combine(pairs)
        assert big == math.prod(mods)
        assert 0 <= x < big
        for r, m in pairs:
            assert x % m == r
        brute = next(z for z in range(big) if all(z % m == r for r, m in pairs))
        assert x == brute


def test_crt_edge_cases():
    assert crt_combine([]) == (0, 1)
    assert crt_combine([(0, 1), (4, 9)]) == (4, 9)
    with pytest.raises(ValueError):
        crt_combine([(1, 6), (3, 4)])  # moduli share a factor
    with pytest.raises(ValueError):
        crt_combine([(0, 0)])
