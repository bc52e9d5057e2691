"""Command-line entry point: solve one problem and write the reports.

Exit codes: 0 when every check passes, 2 when the solver reports an
inconsistency, 1 for bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .corpus import IDS, build_example, example
from .equation import Problem, new_problem
from .errors import LogRootError
from .poly import ComplexPoly
from .report import emit_report, export_csv, write_svg
from .solver import SolveParams, solve

log = logging.getLogger("logroot")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONSISTENT = 2


@dataclass
class RunConfig:
    input: Optional[str] = None
    example: Optional[str] = None
    params: dict = field(default_factory=dict)
    w: Optional[complex] = None
    out: Optional[str] = None
    csv: Optional[str] = None
    svg: Optional[str] = None
    tol: Optional[float] = None
    dynamics: bool = True
    certificate: bool = True
    threads: int = 1
    seed: int = 0


class InputError(Exception):
    pass


def _coeff(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InputError(f"coefficient {x!r} is not a [re, im] pair")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return complex(x)
    raise InputError(f"coefficient {x!r} is neither a number nor a [re, im] pair")


def load_problem_file(path: str) -> Problem:
    """Read {"p": [[re, im], ...], "q": [...], "w": [re, im]}, coefficients ascending."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict) or "p" not in doc or "q" not in doc:
        raise InputError(f"{path} must hold an object with keys 'p' and 'q'")
    p = ComplexPoly([_coeff(c) for c in doc["p"]])
    q = ComplexPoly([_coeff(c) for c in doc["q"]])
    w = _coeff(doc["w"]) if "w" in doc else 0j
    return new_problem(p, q, w)


def _param_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_param(item: str) -> tuple[str, object]:
    key, sep, value = item.partition("=")
    if not sep or not key:
        raise InputError(f"--param expects k=v, got {item!r}")
    return key, _param_value(value)


def parse_w(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"--w expects RE,IM, got {text!r}")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as "inconsistent"
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="logroot", description="Count and locate all solutions of p(z) log|z| + q(z) = w p(z)/2.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="problem JSON file")
    src.add_argument("--example", metavar="ID", choices=IDS, help="built-in example family")
    ap.add_argument("--param", metavar="K=V", action="append", default=[], help="example parameter, repeatable")
    ap.add_argument("--w", metavar="RE,IM", help="target value w of g (default 0)")
    ap.add_argument("--out", metavar="PATH", help="report JSON path (default stdout)")
    ap.add_argument("--csv", metavar="PATH", help="write curve samples as CSV")
    ap.add_argument("--svg", metavar="PATH", help="write a plot of curves and solutions")
    ap.add_argument("--tol", type=float, metavar="X", help="Newton residual tolerance")
    ap.add_argument("--no-dynamics", action="store_true", help="skip the fixed-point cross-check")
    ap.add_argument("--no-certificate", action="store_true", help="skip the sign-change certificate")
    ap.add_argument("--threads", type=int, default=1, metavar="N")
    ap.add_argument("--seed", type=int, default=0, metavar="N", help="perturbation seed for the dynamics")
    return ap


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.param and args.example is None:
        raise InputError("--param only applies together with --example")
    return RunConfig(
        input=args.input,
        example=args.example,
        params=dict(parse_param(p) for p in args.param),
        w=parse_w(args.w) if args.w is not None else None,
        out=args.out,
        csv=args.csv,
        svg=args.svg,
        tol=args.tol,
        dynamics=not args.no_dynamics,
        certificate=not args.no_certificate,
        threads=max(1, args.threads),
        seed=args.seed,
    )


def load_problem(config: RunConfig) -> Problem:
    if (config.input is None) == (config.example is None):
        raise InputError("give exactly one of --input and --example")
    if config.input is not None:
        prob = load_problem_file(config.input)
    else:
        prob = build_example(example(config.example, **config.params))
    if config.w is not None:
        prob = prob.with_w(config.w)
    return prob


def run(config: RunConfig) -> int:
    try:
        prob = load_problem(config)
    except (InputError, LogRootError, TypeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    params = SolveParams(
        threads=config.threads,
        certificate=config.certificate,
        dynamics=config.dynamics,
        dynamics_seed=config.seed,
    )
    if config.tol is not None:
        params = replace(params, solve_tol=config.tol)
    report = solve(prob, params)

    text = emit_report(report)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config.csv and report.trace is not None:
        export_csv(report.trace, config.csv)
    if config.svg:
        write_svg(report, config.svg)

    if report.status != "ok":
        for note in report.notes:
            print(f"inconsistent: {note}", file=sys.stderr)
        if report.dynamics_check is not None:
            for note in report.dynamics_check.notes:
                print(f"inconsistent: {note}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def _setup_logging() -> None:
    level = os.environ.get("LOGROOT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    try:
        config = config_from_args(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
