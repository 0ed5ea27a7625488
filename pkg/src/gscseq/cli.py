"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
3 I/O error. Rationals are given as ``p/q``; decimals are refused.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from .analysis import phase_resolution
from .equivalence import MowFamilyQuery, enumerate_mow_isl, family_size
from .experiments import EXPERIMENTS, ExperimentConfig, analyze_sequence, reproduce, verification_report
from .planner import beam_direction, make_sweep_plan, passband
from .rational import as_rational, fmt
from .seqcore import GscParams, MowParams, dft_codeword, gc_phases, gsc_phases, mow_phases
from .serialize import SequenceFormatError, dumps_json, ffmt, load_sequence, save_sequence, write_table

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_VALUE_OPTS = {"--b", "--gamma", "--u0", "--f0", "--beta", "--alpha"}
_NEGATIVE = re.compile(r"^-\d")


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse would read "-15/2" as an option; glue it to its flag instead
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(x) for x in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gscseq", description="Generalized step-chirp sequence toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="construct a sequence and write it to JSON or CSV")
    gen.add_argument("family", choices=["gsc", "gc", "dft", "mow"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--gamma", type=_rational)
    gen.add_argument("--b", type=_rational)
    gen.add_argument("--u0", type=_rational)
    gen.add_argument("--s", type=int)
    gen.add_argument("--alpha", type=_int_list)
    gen.add_argument("--beta", type=_int_list)
    gen.add_argument("--f0", type=_rational_list)
    gen.add_argument("-o", "--out", help="output file (.json or .csv)")

    ana = sub.add_parser("analyze", help="correlation, spectrum and phase-grid metrics for a sequence file")
    ana.add_argument("file")
    ana.add_argument("--dft-len", type=int)
    ana.add_argument("--grid", type=int, default=2048)
    ana.add_argument("-o", "--out", help="directory for autocorrelation/spectrum CSVs and metrics JSON")

    plan = sub.add_parser("plan", help="beam-sweep plan covering [-1, 1)")
    plan.add_argument("--n", type=int, required=True)
    plan.add_argument("--m", type=int, required=True)
    plan.add_argument("--gamma", type=_rational, required=True)
    plan.add_argument("-o", "--out", help="plan JSON path")
    plan.add_argument("--csv", help="per-beam CSV path")

    ver = sub.add_parser("verify", help="exact equivalence checks and invariant suites")
    ver.add_argument("--n-max", type=int, default=60)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--inject-fault", action="store_true", help="add a corrupted fixture (negative control)")
    ver.add_argument("-o", "--out", help="report JSON path")

    enum = sub.add_parser("enum-mow", help="enumerate a Mow family and rank it by ISL")
    enum.add_argument("--n", type=int, required=True)
    enum.add_argument("--f0-policy", choices=["fixed-zero", "half-integers"], default="fixed-zero")
    enum.add_argument("--all-m", action="store_true", help="use the square part of N as m instead of m = 1")
    enum.add_argument("-o", "--out", help="output directory")

    rep = sub.add_parser("reproduce", help="regenerate a figure's data")
    rep.add_argument("experiment", choices=EXPERIMENTS)
    rep.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a recipe setting")
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("-o", "--out", default="results", help="output directory")
    return parser


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"{args.family} needs {', '.join(missing)}")


def _cmd_generate(args) -> int:
    if args.family == "gsc":
        _need(args, "n", "m", "gamma", "b")
        params = GscParams(args.n, args.m, args.gamma, args.b)
        seq = gsc_phases(params)
    elif args.family == "gc":
        _need(args, "n", "gamma", "b")
        params = GscParams(args.n, 1, args.gamma, args.b)
        seq = gc_phases(args.n, args.gamma, args.b)
    elif args.family == "dft":
        _need(args, "n", "u0")
        params = None
        seq = dft_codeword(args.n, args.u0)
    else:
        _need(args, "s", "m", "alpha", "beta", "f0")
        seq = mow_phases(MowParams(args.s, args.m, tuple(args.alpha), tuple(args.beta), tuple(args.f0)))
        params = None
    if args.out:
        save_sequence(seq, args.out)
    res = phase_resolution(seq)
    print(f"family: {seq.label}")
    print(f"N: {seq.N}")
    print(f"phase resolution: 2*pi/{res.levels} ({ffmt(res.radians)} rad)")
    if params is not None:
        band = passband(params)
        print(f"u0: {fmt(beam_direction(params))}")
        print("passband: " + " U ".join(f"[{fmt(lo)}, {fmt(hi)})" for lo, hi in band.segments))
    elif seq.label == "dft":
        print(f"u0: {fmt(args.u0)}")
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    seq = load_sequence(args.file)
    bundle = analyze_sequence(seq, args.dft_len, args.grid)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in bundle.tables.items():
            (out / f"{name}.csv").write_text(text, newline="")
        (out / "metrics.json").write_text(dumps_json(bundle.summary), newline="")
    sys.stdout.write(dumps_json(bundle.summary))
    return EXIT_OK


def _cmd_plan(args) -> int:
    plan = make_sweep_plan(args.n, args.m, args.gamma)
    doc = dumps_json(plan.as_dict())
    rows = [
        (i + 1, beam.b, beam.u0, ";".join(f"{fmt(lo)}:{fmt(hi)}" for lo, hi in beam.passband.segments))
        for i, beam in enumerate(plan.beams)
    ]
    if args.out:
        Path(args.out).write_text(doc, newline="")
    if args.csv:
        write_table(args.csv, ["beam", "b", "u0", "segments"], rows)
    print(f"{len(plan.beams)} beams (N={plan.N}, m={plan.m}, gamma={fmt(plan.gamma)})")
    for beam_no, b, u0, segs in rows:
        print(f"  beam {beam_no}: b={fmt(b)} u0={fmt(u0)} covers {segs}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.n_max < 2:
        raise ValueError("--n-max must be at least 2")
    report = verification_report(args.n_max, args.seed, args.inject_fault)
    text = dumps_json(report)
    if args.out:
        Path(args.out).write_text(text, newline="")
    print(f"checked {report['checked']} tuples, {len(report['failures'])} failures")
    for name, ok in report["invariants"].items():
        print(f"  {name}: {'pass' if ok else 'FAIL'}")
    print("PASS" if report["passed"] else "FAIL")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def _cmd_enum(args) -> int:
    query = MowFamilyQuery(args.n, restrict_m_to_1=not args.all_m, f0_policy=args.f0_policy)
    results = enumerate_mow_isl(query)
    best, best_isl = results[0]
    summary = {
        "count": len(results),
        "expected_count": family_size(query),
        "min_isl": best_isl,
        "argmin": best.as_dict(),
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        rows = (
            (" ".join(map(str, p.alpha)), " ".join(map(str, p.beta)), " ".join(fmt(f) for f in p.f0), v)
            for p, v in results
        )
        write_table(out / "mow_family.csv", ["alpha", "beta", "f0", "isl"], rows)
        (out / "summary.json").write_text(dumps_json(summary), newline="")
    sys.stdout.write(dumps_json(summary))
    return EXIT_OK


def _parse_overrides(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        out[key] = value
    return out


def _cmd_reproduce(args) -> int:
    config = ExperimentConfig(args.experiment, _parse_overrides(args.set), args.seed)
    bundle = reproduce(config)
    paths = bundle.write(args.out)
    print(json.dumps({"experiment": args.experiment, "config_hash": config.hash(), "files": [str(p) for p in paths]}, indent=2))
    return EXIT_OK


COMMANDS = {
    "generate": _cmd_generate,
    "analyze": _cmd_analyze,
    "plan": _cmd_plan,
    "verify": _cmd_verify,
    "enum-mow": _cmd_enum,
    "reproduce": _cmd_reproduce,
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except SequenceFormatError as exc:
        print(f"error: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
