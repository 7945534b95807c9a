"""Partition instances, the congruence-system construction, and the decision."""
from __future__ import annotations

import dataclasses
import math

import gmpy2
import pytest

from invphi.inverter import verify_certificate
from invphi.numcore import euler_phi, is_prime
from invphi.reduction import (
    CongruenceSystem,
    LiftSearchExhausted,
    ModulusBudgetError,
    PartitionInstance,
    SearchBounds,
    assemble_candidates,
    brute_force_partition,
    build_system,
    decide,
    find_prime_lifts,
    read_instance_file,
    verify_conditions,
)
from invphi.reduction import _prime_shifts


@pytest.fixture(scope="module")
def system_11() -> CongruenceSystem:
    return build_system(PartitionInstance((1, 1)))


@pytest.fixture(scope="module")
def system_13() -> CongruenceSystem:
    return build_system(PartitionInstance((1, 3)))


@pytest.fixture(scope="module")
def system_k3() -> CongruenceSystem:
    return build_system(PartitionInstance((2, 2, 1, 1, 0, 0)))


# --- instances -----------------------------------------------------------------


def test_instance_basics():
    inst = PartitionInstance((2, 2, 1, 1, 0, 0))
    assert inst.k == 3 and inst.total == 6 and inst.half == 3
    assert str(inst) == "2 2 1 1 0 0"


def test_instance_validation():
    with pytest.raises(ValueError):
        PartitionInstance((1, 2, 3))  # odd count
    with pytest.raises(ValueError):
        PartitionInstance(())  # empty
    with pytest.raises(ValueError):
        PartitionInstance((1, -1))  # negative
    with pytest.raises(ValueError):
        PartitionInstance((1, 2))  # odd total


def test_normalize():
    assert PartitionInstance((1, 1)).normalized().values == (1, 1)
    assert PartitionInstance((1, 3)).normalized().values == (1, 3)
    norm = PartitionInstance((2, 2, 1, 1)).normalized()
    assert norm.values == (2, 2, 1, 1, 0, 0) and norm.k == 3


def test_normalize_preserves_answer():
    for values in ((2, 2, 1, 1), (1, 1, 1, 5), (0, 0, 3, 3)):
        inst = PartitionInstance(values)
        assert (brute_force_partition(inst)[0]
                == brute_force_partition(inst.normalized())[0])


def test_read_instance_file(tmp_path):
    path = tmp_path / "inst.txt"
    path.write_text("2\n2\n\n1\n1\n0\n0\n", encoding="ascii")
    assert read_instance_file(str(path)).values == (2, 2, 1, 1, 0, 0)
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nx\n", encoding="ascii")
    with pytest.raises(ValueError):
        read_instance_file(str(bad))


def test_brute_force_partition():
    assert brute_force_partition(PartitionInstance((1, 1))) == (True, (0,))
    assert brute_force_partition(PartitionInstance((1, 3))) == (False, None)
    yes, witness = brute_force_partition(PartitionInstance((2, 2, 1, 1, 0, 0)))
    assert yes and witness == (0, 2, 4)


# --- system construction ----------------------------------------------------------


def test_system_prime_ladders(system_11, system_k3):
    assert system_11.r_primes == ()
    assert system_11.u_primes == (2, 3, 5)
    assert system_11.v_primes == (7, 11, 13, 17, 19)
    assert system_k3.r_primes == (5, 7)
    assert system_k3.u_primes == (11, 13)
    assert len(system_k3.v_primes) == 13 and system_k3.v_primes[0] == 17


def test_u_prime_product_dominates_sums(system_11, system_13, system_k3):
    for system in (system_11, system_13, system_k3):
        bound = 1 + sum(system.values)
        assert math.prod(system.u_primes) > 2 * bound
        assert system.u_count == len(system.u_primes)


def test_exponent_table_for_k3(system_k3):
    # Smallest g with 1 + j*g landing in the class r (mod 2r): j=1 against
    # r=5 gives 4; j=2 against r=7 has the two classes {3, 10} and the
    # smaller is taken.
    assert system_k3.g_values == (4, 3)
    for j, (g, r) in enumerate(zip(system_k3.g_values, system_k3.r_primes), start=1):
        assert (1 + j * g) % (2 * r) == r


def test_theta_omits_half_sum(system_k3):
    for u, row in zip(system_k3.u_primes, system_k3.theta):
        omitted = (sum(system_k3.values) // 2) % u
        assert len(row) == u - 1
        assert omitted not in row
        assert list(row) == sorted(row)


def test_delta_is_inverse_of_k(system_k3):
    # delta[i][j] = k^{-1} mod (u_i * v_j); first cell is 3^{-1} mod 187.
    assert system_k3.delta[0][0] == 125
    for u, row in zip(system_k3.u_primes, system_k3.delta):
        assert len(row) == min(u - 1, len(system_k3.v_primes))
        for w, d in zip(system_k3.v_primes, row):
            assert (d * system_k3.k) % (u * w) == 1
            assert 0 <= d < u * w


def test_components_pairwise_coprime_and_multiply_to_modulus(system_11, system_k3):
    for system in (system_11, system_k3):
        mods = [m for _, m in system.components]
        assert math.prod(mods) == system.modulus
        for i in range(len(mods)):
            for j in range(i + 1, len(mods)):
                assert math.gcd(mods[i], mods[j]) == 1


def test_component_labels_and_sizes(system_11, system_k3):
    labels_11 = [label for label, _ in system_11.components]
    assert labels_11[:3] == ["8", "3", "5"]
    assert labels_11[3] == "t[1,1]" and labels_11[-1] == "t[3,5]"
    assert len(labels_11) == 3 + 15
    assert system_11.modulus.bit_length() == 430
    assert system_k3.modulus.bit_length() == 11298
    q1 = dict(system_k3.components)["q[1]"]
    assert q1 == (2**5 + 1) // 3


def test_residues_fixed_class_mod_120(system_11, system_13, system_k3):
    # CRT of (1 mod 8, 2 mod 3, 4 mod 5) pins every residue to 89 mod 120.
    for system in (system_11, system_13, system_k3):
        assert len(system.residues) == 2 * system.k
        for a in system.residues:
            assert a % 120 == 89
            assert math.gcd(a, system.modulus) == 1
            assert 0 <= a < system.modulus


def test_rejects_even_k_and_tiny_budget():
    with pytest.raises(ValueError):
        build_system(PartitionInstance((2, 2, 1, 1)))
    with pytest.raises(ModulusBudgetError) as info:
        build_system(PartitionInstance((1, 1)), max_modulus_bits=64)
    assert info.value.budget == 64 and info.value.bits > 64


def test_dump_format(system_k3):
    dump = build_system(PartitionInstance((2, 2, 1, 1, 0, 0))).dumps()
    lines = dump.splitlines()
    assert lines[0] == "partition-values: 2 2 1 1 0 0"
    assert "k: 3" in lines and "half-sum: 3" in lines
    assert "modulus-bits: 11298" in lines
    assert "r-primes: 5 7" in lines and "u-primes: 11 13" in lines
    assert "g: 4 3" in lines
    assert any(line.startswith("theta[2]: ") for line in lines)
    assert any(line.startswith("delta[1]: 125 ") for line in lines)
    assert any(line.startswith("component t[2,13]: ") for line in lines)
    assert lines[-1] == f"modulus: {system_k3.modulus}"
    assert sum(1 for line in lines if line.startswith("residue[")) == 6


# --- condition verification ---------------------------------------------------------


def test_singleton_gcd_direction(system_11, system_13):
    # Balanced singletons escape every trap; unbalanced ones are caught.
    for a in system_11.residues:  # each value is 1 = half the total
        assert math.gcd(2 * a + 1, system_11.modulus) == 1
    for a in system_13.residues:  # values 1 and 3 against half-sum 2
        assert math.gcd(2 * a + 1, system_13.modulus) > 1


def test_verify_conditions_pass(system_11, system_13, system_k3):
    for system, values in ((system_11, (1, 1)), (system_13, (1, 3)),
                           (system_k3, (2, 2, 1, 1, 0, 0))):
        inst = PartitionInstance(values)
        report = verify_conditions(system, inst, samples=5)
        assert report.passed, report.first_violation
        assert report.samples == 5
        subsets = sum(math.comb(2 * inst.k, size) for size in range(1, inst.k + 1))
        assert report.subsets_checked == 5 * subsets
        assert str(report).startswith("pass: 5 lift samples")


def test_verify_conditions_catches_tampering(system_13):
    doctored = dataclasses.replace(
        system_13, residues=(system_13.residues[0] * 7 % system_13.modulus,
                             system_13.residues[1]))
    report = verify_conditions(doctored, PartitionInstance((1, 3)), samples=5)
    assert not report.passed
    assert report.first_violation is not None
    assert str(report).startswith("FAIL")


def test_verify_conditions_rejects_mismatched_instance(system_11):
    with pytest.raises(ValueError):
        verify_conditions(system_11, PartitionInstance((1, 3)))


def test_verify_conditions_deterministic(system_11):
    inst = PartitionInstance((1, 1))
    a = verify_conditions(system_11, inst, samples=8, seed=7)
    b = verify_conditions(system_11, inst, samples=8, seed=7)
    assert a == b


# --- prime lifts ----------------------------------------------------------------------


def test_prime_shifts_basics():
    hits = list(_prime_shifts(1, 2, (0, 50)))
    assert hits[:5] == [(1, 3), (2, 5), (3, 7), (5, 11), (6, 13)]
    assert all(is_prime(p) and p == 1 + 2 * t for t, p in hits)
    # The sieve never knocks out the prime equal to its own screen entry,
    # and the skip set drops exact values.
    assert (2, 5) not in list(_prime_shifts(1, 2, (0, 50), skip=frozenset({5})))
    assert list(_prime_shifts(1, 2, (10, 10))) == []


def test_find_prime_lifts(system_11, system_k3):
    lifts = find_prime_lifts(system_11)
    assert set(lifts) == {0, 1}
    values = {i: system_11.residues[i] + system_11.modulus * t
              for i, t in lifts.items()}
    assert all(is_prime(v) for v in values.values())
    # The two residues coincide here, so distinctness must be enforced.
    assert system_11.residues[0] == system_11.residues[1]
    assert values[0] != values[1]
    assert find_prime_lifts(system_11, exclude=(0, 1)) == {}
    with pytest.raises(LiftSearchExhausted) as info:
        find_prime_lifts(system_k3, exclude=(0, 1), search_bound=2)
    assert info.value.bound == 2


# --- candidate assembly ------------------------------------------------------------------


def test_assemble_candidates_shape(system_11):
    inst = PartitionInstance((1, 1))
    bounds = SearchBounds(lift_bound=10_000, x_window=(0, 1500), y_window=(0, 1500))
    batch = assemble_candidates(system_11, inst, bounds)
    assert len(batch.blocks) == 1  # ell ranges over 2..min(k+2, 2k) = 2
    assert batch.pair_count() <= (inst.k + 1) * 1500 * 1500
    count = 0
    for cand in batch.records():
        count += 1
        assert len(set(cand.primes)) == len(cand.primes)
        assert cand.n_value == 4 * math.prod(cand.primes)
        assert cand.factorization.value == cand.n_value
        for i, p in enumerate(cand.primes):
            assert p % system_11.modulus == system_11.residues[i]
            assert is_prime(p)
        assert cand.f_value == 2 * math.prod(cand.primes[i] for i in cand.f_side) + 1
        assert cand.g_value == 2 * math.prod(cand.primes[i] for i in cand.g_side) + 1
        if is_prime(cand.f_value) and is_prime(cand.g_value):
            assert (cand.f_value - 1) * (cand.g_value - 1) == cand.n_value
    # pair_count() sizes the raw shift grid; records() additionally drops
    # pairs that would reuse one prime twice (both residues coincide here,
    # so the diagonal goes away).
    assert 0 < count <= batch.pair_count()


# --- the decision ----------------------------------------------------------------------------


def test_decide_no_instance():
    bounds = SearchBounds(lift_bound=3000, x_window=(0, 3000), y_window=(0, 3000))
    result = decide(PartitionInstance((1, 3)), bounds)
    assert result.verdict == "no"
    assert result.oracle_says is False and result.witness is None
    assert result.candidates_checked > 0
    assert result.certificate is None
    assert str(result).startswith("no\n")


def test_decide_inconclusive_when_windows_too_small():
    bounds = SearchBounds(lift_bound=10_000, x_window=(0, 120), y_window=(0, 120))
    result = decide(PartitionInstance((1, 1)), bounds)
    assert result.verdict == "inconclusive"
    assert result.oracle_says is True and result.witness == (0,)
    assert "widen the bounds" in result.reason


def test_decide_inconclusive_when_lifts_exhausted():
    bounds = SearchBounds(lift_bound=1, x_window=(0, 1), y_window=(0, 1))
    result = decide(PartitionInstance((2, 2, 1, 1)), bounds)
    assert result.verdict == "inconclusive"
    assert "no prime of the form" in result.reason


def test_decide_is_deterministic():
    bounds = SearchBounds(lift_bound=2000, x_window=(0, 2000), y_window=(0, 2000))
    assert decide(PartitionInstance((1, 3)), bounds, seed=1) == \
        decide(PartitionInstance((1, 3)), bounds, seed=2)


def test_decide_yes_certificate_checks_out():
    # Windows sized to the first workable shift pair for this instance.
    bounds = SearchBounds(lift_bound=10_000, x_window=(8000, 9000),
                          y_window=(24000, 26000))
    result = decide(PartitionInstance((1, 1)), bounds)
    assert result.verdict == "yes"
    assert result.oracle_says is True
    cert = result.certificate
    assert cert is not None and len(cert.entries) == 2
    assert all(exp == 1 and is_prime(p) for p, exp in cert.entries)
    assert verify_certificate(result.candidate.n_value, cert)
    assert euler_phi(cert) == result.candidate.n_value
