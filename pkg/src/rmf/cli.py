"""Command-line entry point.

Exit status is 0 on success, 1 when the case study's expectations fail and
2 for usage or input errors. Diagnostics go to standard error.

Convergence is a plain sum of grades and therefore scales with the
population size; compare algorithms at equal population sizes.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from rmf.casestudy import check_case_study, run_case_study
from rmf.errors import DomainError, ParseError
from rmf.fronts import FrontShape, FrontSpec, generate_front
from rmf.geometry import ReferenceSet
from rmf.io import (
    load_pairing,
    load_population,
    load_windows,
    save_population,
    save_report,
    write_population,
)
from rmf.metrics import combined_score, evaluate, igd

EXIT_OK = 0
EXIT_ASSERT = 1
EXIT_USAGE = 2


class InputError(Exception):
    """A user-supplied input was rejected; the message names it."""


def _load(loader, path, what):
    try:
        return loader(path)
    except (ParseError, DomainError) as exc:
        raise InputError(f"{what} {path}: {exc}") from exc
    except OSError as exc:
        raise InputError(f"{what} {path}: {exc.strerror or exc}") from exc


def _reference(args) -> ReferenceSet:
    pts = _load(load_population, args.ref, "reference")
    try:
        ref = ReferenceSet(pts)
    except DomainError as exc:
        raise InputError(f"reference {args.ref}: {exc}") from exc
    if args.dim is not None and ref.dim != args.dim:
        raise InputError(f"reference {args.ref}: expected {args.dim} objectives, found {ref.dim}")
    return ref


def _pairing(args):
    spec = args.pairs
    if spec in (None, "stride2"):
        return None
    if spec.startswith("file:"):
        return _load(load_pairing, spec[len("file:"):], "pairing")
    raise InputError(f"--pairs must be 'stride2' or 'file:PATH', got {spec!r}")


def _evaluate_file(path, ref, pairing, windows):
    pop = _load(load_population, path, "population")
    try:
        return evaluate(pop, ref, pairing, windows)
    except DomainError as exc:
        raise InputError(f"population {path}: {exc}") from exc


def cmd_evaluate(args) -> int:
    if len(args.pop) != 1:
        raise InputError("evaluate takes exactly one --pop file")
    ref = _reference(args)
    windows = _load(load_windows, args.windows, "windows") if args.windows else None
    report = _evaluate_file(args.pop[0], ref, _pairing(args), windows)
    if args.out:
        save_report(report, args.out)
    print(f"convergence: {report.convergence:.4f}")
    print(f"diversity: {report.diversity:.4f}")
    print("regions: " + ", ".join(f"{k}={v}" for k, v in report.region_histogram.items()))
    for w in report.local_windows:
        span = "other" if w.window is None else f"[{w.window[0]:g}, {w.window[1]:g}]"
        div = "n/a" if w.diversity is None else f"{w.diversity:.4f}"
        print(f"window {span}: convergence {w.convergence:.4f}, diversity {div}")
    return EXIT_OK


def cmd_compare(args) -> int:
    if len(args.pop) < 2:
        raise InputError("compare needs at least two --pop files")
    ref = _reference(args)
    pairing = _pairing(args)
    rows = []
    for path in args.pop:
        report = _evaluate_file(path, ref, pairing, None)
        rows.append((Path(path).stem, report.convergence, report.diversity))
    try:
        result = combined_score(rows, args.alpha, args.beta)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        save_report(result, args.out)
    width = max(len(r[0]) for r in rows + [("name",)])
    print(f"{'rank':>4}  {'name':<{width}}  {'convergence':>12}  {'diversity':>9}  {'S1':>6}  {'S2':>6}  {'score':>6}")
    for rank, e in enumerate(result.ranked(), start=1):
        print(f"{rank:>4}  {e.name:<{width}}  {e.convergence:>12.4f}  {e.diversity:>9.4f}  "
              f"{e.s1:>6.4f}  {e.s2:>6.4f}  {e.score:>6.4f}")
    return EXIT_OK


def cmd_case_study(args) -> int:
    study = run_case_study()
    print(f"{'spot':>4}  {'f1':>8}  {'f2':>8}  {'IGD':>8}  {'score':>6}  region")
    for k, (p, c, g, region) in enumerate(zip(study.probes, study.igd_contributions,
                                              study.grades, study.regions), start=1):
        print(f"{k:>4}  {p[0]:>8.4f}  {p[1]:>8.4f}  {c:>8.4f}  {g:>6.4f}  {region.value}")
    if args.out:
        save_report(study.report, args.out)
    problems = check_case_study(study)
    if problems:
        print(f"case study failed: {problems[0]}", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


def cmd_gen_front(args) -> int:
    try:
        ref = generate_front(FrontSpec(args.shape, args.n, (args.lo, args.hi)))
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        save_population(args.out, ref.points, header=["f1", "f2"])
    else:
        write_population(sys.stdout, ref.points, header=["f1", "f2"])
    return EXIT_OK


def cmd_igd(args) -> int:
    if len(args.pop) != 1:
        raise InputError("igd takes exactly one --pop file")
    pop = _load(load_population, args.pop[0], "population")
    ref = _load(load_population, args.ref, "reference")
    try:
        value = igd(pop, ref)
    except DomainError as exc:
        raise InputError(f"{args.pop[0]}: {exc}") from exc
    print(f"{value:.6f}")
    return EXIT_OK


def _weight(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"weight must be non-negative, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmf",
        description="Regionalized scoring of multi-objective solution sets against a reference front.",
        epilog="Convergence sums grades, so it grows with population size; compare equal-size populations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pop", nargs="+", default=[], metavar="PATH", help="population CSV file(s)")
    common.add_argument("--ref", required=True, metavar="PATH", help="reference front CSV file")
    common.add_argument("--pairs", default="stride2", metavar="stride2|file:PATH",
                        help="reference pairing for the cluster balls (default: stride2)")
    common.add_argument("--dim", type=int, choices=(2, 3), help="expected number of objectives")
    common.add_argument("--out", metavar="PATH", help="write a JSON report (plus <stem>.plot.csv)")

    p = sub.add_parser("evaluate", parents=[common], help="grade one population")
    p.add_argument("--windows", metavar="PATH", help="observation windows, one 'start_f1,end_f1' per line")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", parents=[common], help="rank several populations")
    p.add_argument("--alpha", type=_weight, default=0.5, help="weight of normalised convergence")
    p.add_argument("--beta", type=_weight, default=0.5, help="weight of normalised diversity")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("case-study", help="equidistant-probe demonstration")
    p.add_argument("--out", metavar="PATH", help="write the probes' report")
    p.set_defaults(func=cmd_case_study)

    p = sub.add_parser("gen-front", help="write a synthetic reference front")
    p.add_argument("--shape", choices=[s.value for s in FrontShape], default=FrontShape.CONVEX_SQRT.value)
    p.add_argument("--n", type=int, default=101, help="number of points (>= 3)")
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--out", metavar="PATH", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_gen_front)

    p = sub.add_parser("igd", help="inverted generational distance of a population")
    p.add_argument("--pop", nargs=1, required=True, metavar="PATH")
    p.add_argument("--ref", required=True, metavar="PATH")
    p.set_defaults(func=cmd_igd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "alpha", 1.0) + getattr(args, "beta", 1.0) <= 0:
        parser.error("alpha + beta must be positive")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"rmf {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
