"""invphi: inverting Euler's totient and what that buys you.

Core: enumerate every m with phi(m) = n in time polynomial in the size of
the search graph (not in n), certify preimages, profile the average case,
run the Partition-to-inversion congruence reduction, and demonstrate
factoring a semiprime with the inverter as oracle.
"""
from .numcore import (
    Factorization,
    crt_combine,
    divisors,
    euler_phi,
    factorize,
    format_factorization,
    is_prime,
    parse_factorization,
)
from .inverter import (
    PreimageSet,
    PrimePowerUnit,
    build_unit_index,
    invert,
    invert_value,
    is_totient,
    psi_star_count,
    verify_certificate,
)
from .stats import phi_sieve, psi_star_sum, runtime_profile, sweep, tau_sum, totient_density
from .reduction import (
    CongruenceSystem,
    PartitionInstance,
    SearchBounds,
    brute_force_partition,
    build_system,
    decide,
    verify_conditions,
)
from .factordemo import (
    OracleBudget,
    SemiprimeInstance,
    factor_via_inversion,
    recover_factors,
    sample_k_pair,
    target,
)

__version__ = "0.1.0"

__all__ = [
    "CongruenceSystem",
    "Factorization",
    "OracleBudget",
    "PartitionInstance",
    "PreimageSet",
    "PrimePowerUnit",
    "SearchBounds",
    "SemiprimeInstance",
    "brute_force_partition",
    "build_system",
    "build_unit_index",
    "crt_combine",
    "decide",
    "divisors",
    "euler_phi",
    "factor_via_inversion",
    "factorize",
    "format_factorization",
    "invert",
    "invert_value",
    "is_prime",
    "is_totient",
    "parse_factorization",
    "phi_sieve",
    "psi_star_count",
    "psi_star_sum",
    "recover_factors",
    "runtime_profile",
    "sample_k_pair",
    "sweep",
    "target",
    "tau_sum",
    "totient_density",
    "verify_certificate",
    "verify_conditions",
]
