"""Command-line front end: inversion, certification, sweeps, reductions.

Exit codes are part of the interface: 0 for success/affirmative, 1 for a
negative decision (nontotient, certificate rejected, partition-no, failed
condition check), 2 for errors and inconclusive outcomes.  Output is plain
text by default and JSON behind --json; every number is ASCII decimal.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import factordemo, inverter, reduction, stats
from .numcore import DEFAULT_SEED, factorize, parse_factorization

_EXIT_OK = 0
_EXIT_NEGATIVE = 1
_EXIT_ERROR = 2


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return _EXIT_ERROR


# --- subcommand handlers ----------------------------------------------------

def _cmd_invert(args: argparse.Namespace) -> int:
    if args.n < 1:
        return _fail(f"n must be positive, got {args.n}")
    if args.factors is not None:
        try:
            f = parse_factorization(args.factors)
        except ValueError as exc:
            return _fail(f"bad factorization string: {exc}")
        if f.value != args.n:
            return _fail(f"factorization multiplies to {f.value}, not {args.n}")
    else:
        f = factorize(args.n, seed=args.seed)
    record = inverter.invert(f).as_record()
    if args.json:
        print(json.dumps(record))
    elif record["solutions"]:
        print(" ".join(str(m) for m in record["solutions"]))
    return _EXIT_OK


def _cmd_is_totient(args: argparse.Namespace) -> int:
    if args.n < 1:
        return _fail(f"n must be positive, got {args.n}")
    answer = inverter.is_totient(factorize(args.n, seed=args.seed))
    if args.json:
        print(json.dumps({"n": args.n, "is_totient": answer}))
    else:
        print("totient" if answer else "nontotient")
    return _EXIT_OK if answer else _EXIT_NEGATIVE


def _cmd_certify(args: argparse.Namespace) -> int:
    if args.n < 1:
        return _fail(f"n must be positive, got {args.n}")
    try:
        preimage = parse_factorization(args.preimage_factors)
    except ValueError as exc:
        return _fail(f"bad factorization string: {exc}")
    accepted = inverter.verify_certificate(args.n, preimage)
    if args.json:
        print(json.dumps({"n": args.n, "preimage": str(preimage), "valid": accepted}))
    else:
        print("valid" if accepted else "invalid")
    return _EXIT_OK if accepted else _EXIT_NEGATIVE


def _cmd_stats(args: argparse.Namespace) -> int:
    if args.limit < 10:
        return _fail(f"limit must be at least 10, got {args.limit}")
    report = stats.sweep(args.limit)
    try:
        with open(args.out, "w", encoding="ascii") as handle:
            handle.write(report.to_csv())
    except OSError as exc:
        return _fail(f"cannot write {args.out}: {exc}")
    if args.json:
        print(json.dumps({"limit": args.limit, "rows": len(report.rows),
                          "out": args.out}))
    else:
        print(f"wrote {len(report.rows)} rows to {args.out}")
    return _EXIT_OK


def _read_instance(path: str) -> reduction.PartitionInstance:
    try:
        return reduction.read_instance_file(path)
    except OSError as exc:
        raise RuntimeError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise RuntimeError(f"bad instance file {path}: {exc}") from exc


def _cmd_reduce(args: argparse.Namespace) -> int:
    try:
        inst = _read_instance(args.input).normalized()
    except RuntimeError as exc:
        return _fail(str(exc))

    if args.action == "build":
        try:
            system = reduction.build_system(inst)
        except reduction.ModulusBudgetError as exc:
            return _fail(str(exc))
        sys.stdout.write(system.dumps())
        return _EXIT_OK

    if args.action == "verify":
        samples = args.bound if args.bound is not None else 50
        try:
            system = reduction.build_system(inst)
        except reduction.ModulusBudgetError as exc:
            return _fail(str(exc))
        report = reduction.verify_conditions(system, inst, samples=samples,
                                             seed=args.seed)
        if args.json:
            print(json.dumps({
                "instance": str(inst), "passed": report.passed,
                "samples": report.samples,
                "subsets_checked": report.subsets_checked,
                "first_violation": report.first_violation,
            }))
        else:
            print(report)
        return _EXIT_OK if report.passed else _EXIT_NEGATIVE

    # decide
    bound = args.bound if args.bound is not None else 10_000
    bounds = reduction.SearchBounds(lift_bound=bound, x_window=(0, bound),
                                    y_window=(0, bound))
    result = reduction.decide(inst, bounds, seed=args.seed)
    if args.json:
        print(json.dumps({
            "instance": str(inst), "verdict": result.verdict,
            "reason": result.reason,
            "certificate": None if result.certificate is None else str(result.certificate),
            "candidates_checked": result.candidates_checked,
        }))
    else:
        print(result)
    if result.verdict == "yes":
        return _EXIT_OK
    if result.verdict == "no":
        return _EXIT_NEGATIVE
    return _EXIT_ERROR


def _cmd_factor_demo(args: argparse.Namespace) -> int:
    try:
        if args.n is not None:
            if args.n < 9:
                return _fail(f"n must be an odd semiprime, got {args.n}")
            inst = factordemo.SemiprimeInstance.from_value(args.n, seed=args.seed)
        else:
            inst = factordemo.SemiprimeInstance.random_semiprime(args.bits,
                                                                 seed=args.seed)
    except ValueError as exc:
        return _fail(str(exc))
    budget = factordemo.OracleBudget(max_samples=args.max_samples)
    try:
        result = factordemo.factor_via_inversion(inst, budget, seed=args.seed)
    except factordemo.FactoringFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_ERROR
    if args.json:
        print(json.dumps({
            "n": inst.n, "samples": result.samples_used,
            "k1": result.k1, "k2": result.k2, "target": result.target_value,
            "m": result.preimage, "p": result.p, "q": result.q,
        }))
    else:
        print(f"n: {inst.n}")
        print(f"samples: {result.samples_used}")
        print(f"k1: {result.k1}")
        print(f"k2: {result.k2}")
        print(f"m: {result.preimage}")
        print(f"p: {result.p}")
        print(f"q: {result.q}")
    return _EXIT_OK


# --- parser ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invphi",
        description="Totient inversion: preimage sets, certificates, "
                    "statistics, and the partition/factoring reductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="seed for any randomized internals (default %(default)s)")
        p.add_argument("--json", action="store_true",
                       help="emit a JSON object instead of plain text")

    p = sub.add_parser("invert", help="list all m with phi(m) = N, ascending")
    p.add_argument("n", metavar="N", type=int)
    p.add_argument("--factors", metavar="STR", default=None,
                   help="factorization of N as 'p1^a1 * p2^a2 * ...' "
                        "(skips internal factoring)")
    add_common(p)
    p.set_defaults(handler=_cmd_invert)

    p = sub.add_parser("is-totient", help="decide whether N has any preimage")
    p.add_argument("n", metavar="N", type=int)
    add_common(p)
    p.set_defaults(handler=_cmd_is_totient)

    p = sub.add_parser("certify", help="check that phi(preimage) = N")
    p.add_argument("n", metavar="N", type=int)
    p.add_argument("--preimage-factors", metavar="STR", required=True,
                   help="claimed preimage as a factorization string")
    add_common(p)
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("stats", help="sweep preimage statistics up to a limit")
    p.add_argument("--limit", metavar="X", type=int, required=True)
    p.add_argument("--out", metavar="PATH", required=True,
                   help="CSV output path")
    add_common(p)
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("reduce",
                       help="partition-instance commands (build/verify/decide)")
    p.add_argument("action", choices=("build", "verify", "decide"))
    p.add_argument("--input", metavar="PATH", required=True,
                   help="instance file: one nonnegative decimal per line")
    p.add_argument("--bound", metavar="B", type=int, default=None,
                   help="verify: number of random lifts (default 50); "
                        "decide: lift bound and window size (default 10000)")
    add_common(p)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("factor-demo",
                       help="factor a semiprime by repeated totient inversion")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, default=None,
                       help="the semiprime to factor")
    group.add_argument("--bits", type=int, default=None,
                       help="factor a random semiprime with two primes of "
                            "this many bits")
    p.add_argument("--max-samples", metavar="C", type=int, default=100_000)
    add_common(p)
    p.set_defaults(handler=_cmd_factor_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except BrokenPipeError:
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
