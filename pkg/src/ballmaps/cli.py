"""Command-line interface tying the pipeline together.

Subcommands: ``check`` (properness certificate), ``classify`` (degree-2
classification), ``induce`` (solve for the matrix map), ``verify`` (numeric
verification of a matrix map against its ball map), ``catalog`` (browse and
re-derive the worked examples), ``lemmas`` (randomized monomial-count
harnesses), ``search`` (brute-force oracle).

Exit codes: 0 on success, 1 on mathematical failure (not proper, inconsistent
system, verification failure, harness violations), 2 on usage errors.  Every
randomized subcommand prints its seed, and rerunning with that seed
reproduces the report byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import catalog as catalog_mod
from .ballmap import MonomialBallMap, NotProperError, Signature, properness_certificate
from .classify import (
    ScaleError,
    brute_force_search,
    classify_degree2_r2,
    lemma_harness,
)
from .exactnum import DomainError
from .induce import SolveStatus, SymbolicMatrixMap, solve_induced
from .numverify import (
    verify_boundary_behavior,
    verify_fiber_preservation,
    verify_map_into_domain,
)

EXIT_OK = 0
EXIT_MATH_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(
            f"malformed JSON in {path} at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}") from exc


def _load_map(path: str) -> MonomialBallMap:
    data = _load_json(path)
    try:
        return MonomialBallMap.from_json(data)
    except (KeyError, TypeError, DomainError) as exc:
        raise UsageError(f"invalid map JSON in {path}: {exc}") from exc


def _load_matrix(path: str, arity: Optional[int]) -> SymbolicMatrixMap:
    data = _load_json(path)
    try:
        return SymbolicMatrixMap.from_json(data, arity=arity)
    except (KeyError, TypeError, DomainError) as exc:
        raise UsageError(f"invalid matrix JSON in {path}: {exc}") from exc


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


# -- subcommands ----------------------------------------------------------------


def _cmd_check(args) -> int:
    g = _load_map(args.map)
    try:
        cert = properness_certificate(g, positivity_trials=args.trials,
                                      seed=args.seed)
    except NotProperError as exc:
        _emit({"proper": False, "reason": exc.reason, "seed": args.seed})
        return EXIT_MATH_FAIL
    payload = cert.to_json()
    payload["seed"] = args.seed
    _emit(payload)
    return EXIT_OK if cert.is_positive else EXIT_MATH_FAIL


def _cmd_classify(args) -> int:
    if args.r != 2 or args.degree != 2:
        raise UsageError("classification is implemented for --r 2 --degree 2")
    _emit(classify_degree2_r2().to_json())
    return EXIT_OK


def _cmd_induce(args) -> int:
    g = _load_map(args.map)
    outcome = solve_induced(g)
    payload = outcome.to_json()
    if payload["f"] is not None:
        payload["f"]["r"] = g.signature.r
        payload["f"]["s"] = g.signature.s
        payload["f"]["arity"] = g.signature.r * g.signature.s
    _emit(payload)
    if args.output and payload["f"] is not None:
        with open(args.output, "w", encoding="utf-8") as handle:
            json.dump(payload["f"], handle, indent=2, sort_keys=True)
            handle.write("\n")
    return EXIT_OK if outcome.status != SolveStatus.INCONSISTENT \
        else EXIT_MATH_FAIL


def _cmd_verify(args) -> int:
    g = _load_map(args.against)
    sig = g.signature
    f = _load_matrix(args.matrix, arity=sig.r * sig.s)
    interior = verify_map_into_domain(f, sig.r, sig.s, trials=args.trials,
                                      seed=args.seed)
    boundary = verify_boundary_behavior(f, sig.r, sig.s, seed=args.seed)
    fiber = verify_fiber_preservation(f, g, trials=args.trials,
                                      seed=args.seed)
    verdict = "Pass" if all(r.passed for r in (interior, boundary, fiber)) \
        else "Fail"
    _emit({"seed": args.seed, "verdict": verdict,
           "interior": interior.to_json(), "boundary": boundary.to_json(),
           "fiber": fiber.to_json()})
    return EXIT_OK if verdict == "Pass" else EXIT_MATH_FAIL


def _cmd_catalog(args) -> int:
    if args.action == "list":
        _emit({"entries": catalog_mod.list_entries()})
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog show/verify need an entry name")
    t = _parse_fraction(args.t) if args.t is not None else None
    try:
        if args.action == "show":
            entry = catalog_mod.get(args.name)
            built = entry.build(t if entry.is_parametric else None)
            payload = {
                "name": entry.name,
                "parametric": entry.is_parametric,
                "t": None if not entry.is_parametric else str(
                    t if t is not None else Fraction(0)),
                "notes": list(entry.notes),
                "g": built.g.to_json(),
                "f_expected": built.f_expected.to_json(),
                "expected_free_entries": [list(p) for p in
                                          built.expected_free_entries],
            }
            _emit(payload)
            return EXIT_OK
        report = catalog_mod.verify_entry(args.name, t)
        _emit(report.to_json())
        return EXIT_OK if report.ok else EXIT_MATH_FAIL
    except catalog_mod.NotFoundError as exc:
        raise UsageError(f"unknown catalog entry: {exc}") from exc
    except catalog_mod.ParamError as exc:
        _emit({"error": str(exc), "reason": exc.reason})
        return EXIT_MATH_FAIL


def _cmd_lemmas(args) -> int:
    violations = lemma_harness(args.which, args.trials, args.seed)
    _emit({"lemma": args.which, "trials": args.trials, "seed": args.seed,
           "violations": violations})
    return EXIT_OK if not violations else EXIT_MATH_FAIL


def _cmd_search(args) -> int:
    r, s, rp, sp = args.sig
    grid = [_parse_fraction(part) for part in args.grid.split(",") if part]
    if not grid:
        raise UsageError("--grid needs at least one coefficient square")
    try:
        records = brute_force_search(Signature(r, s, rp, sp), args.degree,
                                     grid)
    except (ScaleError, DomainError) as exc:
        raise UsageError(str(exc)) from exc
    _emit({"signature": [r, s, rp, sp], "degree": args.degree,
           "grid": [str(c) for c in grid],
           "results": [record.to_json() for record in records]})
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballmaps",
        description="Exact toolkit for proper monomial maps between "
                    "generalized balls and induced matrix-domain maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="properness certificate for a map")
    check.add_argument("map", help="path to a map JSON file")
    check.add_argument("--trials", type=int, default=400)
    check.add_argument("--seed", type=int, default=2024)
    check.set_defaults(func=_cmd_check)

    classify = sub.add_parser("classify", help="degree-2 classification")
    classify.add_argument("--r", type=int, default=2)
    classify.add_argument("--degree", type=int, default=2)
    classify.set_defaults(func=_cmd_classify)

    induce = sub.add_parser("induce", help="solve for the induced matrix map")
    induce.add_argument("map", help="path to a map JSON file")
    induce.add_argument("-o", "--output", help="write the matrix JSON here")
    induce.set_defaults(func=_cmd_induce)

    verify = sub.add_parser("verify", help="numeric verification of a matrix map")
    verify.add_argument("matrix", help="path to a matrix JSON file")
    verify.add_argument("--against", required=True,
                        help="path to the ball map JSON file")
    verify.add_argument("--trials", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(func=_cmd_verify)

    cat = sub.add_parser("catalog", help="browse the worked examples")
    cat.add_argument("action", choices=["list", "show", "verify"])
    cat.add_argument("name", nargs="?")
    cat.add_argument("--t", help="rational parameter, e.g. 1/2")
    cat.set_defaults(func=_cmd_catalog)

    lemmas = sub.add_parser("lemmas", help="randomized monomial-count harnesses")
    lemmas.add_argument("--which", required=True,
                        choices=["3.1", "3.2", "3.3", "3.5"])
    lemmas.add_argument("--trials", type=int, default=1000)
    lemmas.add_argument("--seed", type=int, default=0)
    lemmas.set_defaults(func=_cmd_lemmas)

    search = sub.add_parser("search", help="brute-force enumeration oracle")
    search.add_argument("--sig", type=int, nargs=4, required=True,
                        metavar=("R", "S", "RP", "SP"))
    search.add_argument("--degree", type=int, required=True)
    search.add_argument("--grid", required=True,
                        help="comma-separated coefficient squares, e.g. 1,2")
    search.set_defaults(func=_cmd_search)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
