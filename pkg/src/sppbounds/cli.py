"""Command-line front end.

Exit codes: 0 success, 1 usage or malformed input, 2 insufficient data,
3 I/O error.  ``verify`` also exits 1 when a suite reports violations.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import json
import logging
import math
import sys
from typing import IO, Iterator, Optional, Sequence

from . import bounds as B
from . import oracle
from .errors import DomainError, InsufficientData, NotADistribution, SppBoundsError
from .families import DEFAULT_TAIL_CAP, FamilyKind, FamilySpec
from .figures import FIGURES, figure_table
from .fock import ObservableSet, PhotonDistribution, observables
from .tables import write_csv

EXIT_OK, EXIT_USAGE, EXIT_INSUFFICIENT, EXIT_IO = 0, 1, 2, 3

OBSERVABLE_FIELDS = tuple(f.name for f in dataclasses.fields(ObservableSet))
REPORT_COLUMNS = ("eff_g2_vacuum", "eff_g2_photon", "spp_lower", "spp_upper", "smppr_lower",
                  "q_upper", "p0_plus_p1_lower", "set_m1", "set_m2", "set_m3")
SWEEP_COLUMNS = OBSERVABLE_FIELDS + ("exact_smppr",) + REPORT_COLUMNS
_DEFAULT_SWEEP_PARAM = {
    FamilyKind.COHERENT: "mean_photons",
    FamilyKind.THERMAL: "mean_photons",
    FamilyKind.FOCK: "n",
    FamilyKind.QD: "n_alpha",
    FamilyKind.RANDOM: "seed",
}
_INTEGER_PARAMS = {"n", "max_n", "seed"}

EPILOG = """exit codes:
  0  success
  1  usage error or malformed input (verify: suite found violations)
  2  insufficient data (no g2 supplied)
  3  I/O error
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _output(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        yield fh


def _read_input(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def parse_analyze_input(text: str) -> ObservableSet:
    """Distribution JSON (``probs``) or observables JSON (``g2``, ``mean_n``, ``p0``, ...)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError("input must be a JSON object")
    if "probs" in obj:
        extra = set(obj) - {"probs", "tail_bound"}
        if extra:
            raise UsageError(f"unknown distribution fields: {sorted(extra)}")
        return oracle.exact_quantities(PhotonDistribution.from_dict(obj))
    extra = set(obj) - set(OBSERVABLE_FIELDS)
    if extra:
        raise UsageError(f"unknown observable fields: {sorted(extra)}")
    values = {}
    for key, value in obj.items():
        if value is not None and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise UsageError(f"{key} must be a number or null")
        values[key] = None if value is None else float(value)
    return ObservableSet(**values)


def cmd_analyze(args: argparse.Namespace) -> int:
    obs = parse_analyze_input(_read_input(args.input))
    report = B.analyze(obs)
    with _output(args.out) as out:
        out.write(json.dumps(report.to_dict(), allow_nan=False) + "\n")
    return EXIT_OK


def cmd_figure(args: argparse.Namespace) -> int:
    header, rows = figure_table(args.which, args.grid_step, args.tail_cap)
    with _output(args.out) as out:
        write_csv(out, header, rows)
    return EXIT_OK


def sweep_rows(spec: dict, param: str, values: Sequence[float], columns: Sequence[str],
               tail_cap: float = DEFAULT_TAIL_CAP) -> list[list[Optional[float]]]:
    """One row ``[value, *columns]`` per sweep point of ``param``."""
    rows = []
    for value in values:
        family = FamilySpec.from_dict({"kind": spec["kind"], "params": {**spec.get("params", {}), param: value}})
        obs = observables(family.build(tail_cap))
        report = B.analyze(obs)
        row: list[Optional[float]] = [value]
        for col in columns:
            if col == "exact_smppr":
                row.append(obs.p1 / obs.q_multi if obs.q_multi else math.inf)
            elif col in OBSERVABLE_FIELDS:
                row.append(getattr(obs, col))
            else:
                row.append(getattr(report, col))
        rows.append(row)
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        spec = json.loads(args.family)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--family is not valid JSON: {exc}") from None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise UsageError("--family must be a JSON object with a 'kind'")
    try:
        kind = FamilyKind(spec["kind"])
    except ValueError:
        raise UsageError(f"unknown family kind {spec['kind']!r}") from None
    param = args.param or _DEFAULT_SWEEP_PARAM[kind]
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    unknown = [c for c in columns if c not in SWEEP_COLUMNS]
    if unknown or not columns:
        raise UsageError(f"unknown columns {unknown}; choose from {', '.join(SWEEP_COLUMNS)}")
    step = args.grid_step
    if not (step > 0.0):
        raise UsageError("--grid-step must be > 0")
    count = int(math.floor((args.stop - args.start) / step + 1e-9))
    values = [args.start + k * step for k in range(count + 1)]
    if param in _INTEGER_PARAMS:
        values = [int(round(v)) for v in values]
    rows = sweep_rows(spec, param, values, columns, args.tail_cap)
    with _output(args.out) as out:
        write_csv(out, [param, *columns], rows)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    run = oracle.SUITES[args.suite]
    report = run(args.trials, args.seed, args.max_n, args.diagnostics)
    with _output(args.out) as out:
        out.write(report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sppbounds", description="Certified bounds on the single-photon projection of a light source.",
                     epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="bound report for a distribution or measured observables",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--in", dest="input", metavar="PATH", help="input JSON (default: stdin)")
    p.add_argument("--out", metavar="PATH", help="output path (default: stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("figure", help="CSV data for one of the figures")
    p.add_argument("which", choices=FIGURES)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--grid-step", type=float, default=None, metavar="X")
    p.add_argument("--tail-cap", type=float, default=DEFAULT_TAIL_CAP, metavar="X")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sweep", help="observables and bounds along a state family")
    p.add_argument("--family", required=True,
                   help='family JSON, e.g. \'{"kind": "qd", "params": {"p1_tilde": 0.5}}\'')
    p.add_argument("--param", help="swept parameter (default depends on the kind)")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--grid-step", type=float, default=0.01, metavar="X")
    p.add_argument("--columns", required=True, help="comma-separated: " + ", ".join(SWEEP_COLUMNS))
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--tail-cap", type=float, default=DEFAULT_TAIL_CAP, metavar="X")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run a brute-force verification suite")
    p.add_argument("suite", choices=sorted(oracle.SUITES))
    p.add_argument("trials_pos", nargs="?", type=int, metavar="TRIALS")
    p.add_argument("seed_pos", nargs="?", type=int, metavar="SEED")
    p.add_argument("--trials", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=None, metavar="N")
    p.add_argument("--max-n", type=int, default=None, metavar="N")
    p.add_argument("--diagnostics", metavar="PATH", default="verify_diagnostics.jsonl",
                   help="where counterexamples are appended (only written on violations)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "verify":
        args.trials = args.trials or args.trials_pos or 100_000
        args.seed = args.seed if args.seed is not None else (args.seed_pos if args.seed_pos is not None else 42)
        if args.trials < 1:
            parser.error("trials must be >= 1")
    try:
        return args.func(args)
    except InsufficientData as exc:
        print(f"sppbounds: insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (UsageError, NotADistribution, DomainError) as exc:
        print(f"sppbounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SppBoundsError as exc:
        print(f"sppbounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"sppbounds: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
