"""``pitkit`` command-line front end.

Exit codes: 0 for a zero verdict or a passing suite, 1 for a nonzero verdict,
2 for usage errors and malformed input, 3 for internal invariant violations
(including suite disagreements).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager
from typing import Iterable

from .bench import bench
from .circuit import DEFAULT_EXPAND_CAP, Circuit, parse_circuit
from .corpus import MODES, CorpusSpec, LabeledCircuit, default_fields, generate_corpus, run_suite
from .exceptions import InvariantViolation, MalformedDocument, PitError
from .field import FieldSpec, ensure_min_size, field_from_spec
from .hitting import (blackbox_test, circuit_oracle, hitting_set, required_size, schwartz_zippel_test,
                      whitebox_test)
from .ideals import find_certificate, verify_certificate
from .reduce import ReductionMap, family_size

EXIT_ZERO, EXIT_NONZERO, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3

GLOBAL_DEFAULTS = {"field": None, "seed": 0, "jobs": 1, "expand_cap": DEFAULT_EXPAND_CAP, "out": None}


class UsageError(Exception):
    pass


def _global_flags() -> argparse.ArgumentParser:
    # defaults are suppressed so the flags work before or after the subcommand
    g = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    g.add_argument("--field", default=s, help='field as JSON, e.g. \'{"kind":"prime","p":"101"}\'')
    g.add_argument("--seed", type=int, default=s, help="seed for randomized modes and corpora (default 0)")
    g.add_argument("--jobs", type=int, default=s, help="worker processes for suite (default 1)")
    g.add_argument("--expand-cap", type=int, default=s, help=f"monomial cap for expansion (default {DEFAULT_EXPAND_CAP})")
    g.add_argument("--out", default=s, help="write output here instead of stdout")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="pitkit", parents=[common],
                                     description="Deterministic identity testing for sum-product-sum circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", parents=[common], help="decide whether a circuit is identically zero")
    p.add_argument("circuit", help="circuit JSON file ('-' for stdin)")
    p.add_argument("--mode", choices=["hitting", "whitebox", "random", "expand"], default="hitting")
    p.add_argument("--homogenize", action="store_true", help="forms carry a leading constant entry")
    p.add_argument("--trials", type=int, default=40, help="random mode: number of trials")
    p.add_argument("--sample-size", type=int, default=None, help="random mode: |T| (default 2d)")

    p = sub.add_parser("hitting-set", parents=[common], help="stream the hitting set as JSON Lines")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, default=None, help="stop after this many points")

    p = sub.add_parser("reduce", parents=[common], help="apply the variable-reduction map")
    p.add_argument("circuit")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--beta", help="field element (decimal string or JSON coefficient array)")
    grp.add_argument("--family", action="store_true", help="one reduced circuit per beta, JSON Lines")
    p.add_argument("--homogenize", action="store_true")

    p = sub.add_parser("certify", parents=[common], help="find and verify a nonzeroness certificate")
    p.add_argument("circuit")
    p.add_argument("--homogenize", action="store_true")

    p = sub.add_parser("corpus", parents=[common], help="generate a labeled corpus as JSON Lines")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--zero-fraction", type=float, default=0.3)
    p.add_argument("--k-range", type=_range, default=(1, 3), metavar="LO:HI")
    p.add_argument("--d-range", type=_range, default=(1, 4), metavar="LO:HI")
    p.add_argument("--n-range", type=_range, default=(1, 5), metavar="LO:HI")

    p = sub.add_parser("suite", parents=[common], help="run test modes over a corpus and cross-check labels")
    p.add_argument("corpus", nargs="?", help="corpus JSON Lines file; generated from --seed/--count if omitted")
    p.add_argument("--modes", default="hitting,expand", help=f"comma-separated subset of {','.join(MODES)}")
    p.add_argument("--count", type=int, default=100)

    p = sub.add_parser("bench", parents=[common], help="measure hitting-set streaming throughput")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**6, help="number of points to stream")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    return parser


def _range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition(":")
        return int(lo), int(hi or lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None


# --------------------------------------------------------------------------
# helpers


@contextmanager
def _writer(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _emit(out, doc) -> None:
    out.write(json.dumps(doc, separators=(",", ":")) + "\n")


def _field_arg(args) -> FieldSpec | None:
    if args.field is None:
        return None
    try:
        return field_from_spec(json.loads(args.field))
    except json.JSONDecodeError as e:
        raise MalformedDocument(f"--field is not valid JSON: {e}") from e


def _require_field(args) -> FieldSpec:
    F = _field_arg(args)
    if F is None:
        raise UsageError("--field is required for this command")
    return F


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise MalformedDocument(f"{path}: invalid JSON: {e}") from e
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from e


def _load_circuit(args) -> Circuit:
    return parse_circuit(_load_json(args.circuit), homogenize_input=getattr(args, "homogenize", False),
                         field=_field_arg(args))


def _iter_jsonl(path: str) -> Iterable[dict]:
    try:
        fh = sys.stdin if path == "-" else open(path, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from e
    with fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                try:
                    yield json.loads(line)
                except json.JSONDecodeError as e:
                    raise MalformedDocument(f"{path}:{lineno}: invalid JSON: {e}") from e


def _parse_element_text(field: FieldSpec, text: str):
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = str(value)
    return field.parse(value)


# --------------------------------------------------------------------------
# commands


def cmd_test(args) -> int:
    C = _load_circuit(args)
    if args.mode == "expand":
        start = time.perf_counter()
        zero = C.is_zero(args.expand_cap)
        doc = {"verdict": "zero" if zero else "nonzero", "witness": None, "points_evaluated": 0,
               "elapsed_ms": round((time.perf_counter() - start) * 1000, 3)}
    else:
        if args.mode == "hitting":
            v = blackbox_test(circuit_oracle(C), C.k, C.d, C.n, C.field)
        elif args.mode == "whitebox":
            v = whitebox_test(C)
        else:
            size = args.sample_size or max(2 * C.d, 2)
            v = schwartz_zippel_test(circuit_oracle(C, size - 1), C.n, C.d, size, args.trials, args.seed, C.field)
        doc = v.to_json()
        zero = v.is_zero
    with _writer(args.out) as out:
        _emit(out, doc)
    return EXIT_ZERO if zero else EXIT_NONZERO


def cmd_hitting_set(args) -> int:
    F, _ = ensure_min_size(_require_field(args), required_size(args.k, args.d, args.n))
    with _writer(args.out) as out:
        for idx, pt in enumerate(hitting_set(args.k, args.d, args.n, F)):
            if args.limit is not None and idx >= args.limit:
                break
            _emit(out, pt.to_json())
    return EXIT_ZERO


def cmd_reduce(args) -> int:
    C = _load_circuit(args)
    with _writer(args.out) as out:
        if args.family:
            F, emb = ensure_min_size(C.field, family_size(C.k, C.d, C.n) - 1)
            lifted = C.lift(emb) if not emb.is_identity else C
            for b in F.first(family_size(C.k, C.d, C.n)):
                _emit(out, ReductionMap(F, b, C.n, C.k).apply_circuit(lifted).to_json())
        else:
            beta = _parse_element_text(C.field, args.beta)
            _emit(out, ReductionMap(C.field, beta, C.n, C.k).apply_circuit(C).to_json())
    return EXIT_ZERO


def cmd_certify(args) -> int:
    C = _load_circuit(args)
    if C.is_zero(args.expand_cap):
        print("circuit is identically zero; no certificate exists", file=sys.stderr)
        return EXIT_ZERO
    cert = find_certificate(C)
    ok = verify_certificate(C, cert)
    if not ok:
        raise InvariantViolation("certificate found but failed verification")
    with _writer(args.out) as out:
        _emit(out, cert.to_json(verified=ok))
    return EXIT_NONZERO


def _corpus_spec(args, count: int) -> CorpusSpec:
    F = _field_arg(args)
    return CorpusSpec(
        seed=args.seed, count=count,
        k_range=getattr(args, "k_range", (1, 3)), d_range=getattr(args, "d_range", (1, 4)),
        n_range=getattr(args, "n_range", (1, 5)),
        fields=[F] if F is not None else default_fields(),
        zero_fraction=getattr(args, "zero_fraction", 0.3), expand_cap=args.expand_cap,
    )


def cmd_corpus(args) -> int:
    try:
        spec = _corpus_spec(args, args.count)
    except ValueError as e:
        raise UsageError(str(e)) from e
    with _writer(args.out) as out:
        for item in generate_corpus(spec):
            _emit(out, item.to_json())
    return EXIT_ZERO


def cmd_suite(args) -> int:
    modes = [m for m in args.modes.split(",") if m]
    bad = [m for m in modes if m not in MODES]
    if bad or not modes:
        raise UsageError(f"unknown modes {bad}; choose from {','.join(MODES)}")
    if args.corpus:
        corpus = [LabeledCircuit.from_json(doc) for doc in _iter_jsonl(args.corpus)]
    else:
        corpus = generate_corpus(_corpus_spec(args, args.count))
    report = run_suite(corpus, modes, seed=args.seed, jobs=args.jobs, expand_cap=args.expand_cap)
    with _writer(args.out) as out:
        _emit(out, report.to_json())
    return EXIT_ZERO if report.all_agree else EXIT_INVARIANT


def cmd_bench(args) -> int:
    report = bench(args.k, args.d, args.n, _require_field(args), args.budget)
    with _writer(args.out) as out:
        if args.csv:
            out.write(report.to_csv())
        else:
            _emit(out, report.to_json())
    return EXIT_ZERO


COMMANDS = {
    "test": cmd_test, "hitting-set": cmd_hitting_set, "reduce": cmd_reduce, "certify": cmd_certify,
    "corpus": cmd_corpus, "suite": cmd_suite, "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"pitkit: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as e:
        print(f"pitkit: invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except PitError as e:
        # malformed input, field mismatches and exceeded caps are all the caller's to fix
        print(f"pitkit: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
