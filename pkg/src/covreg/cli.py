"""Command-line front end: ingest -> SCM -> regularize -> export/evaluate.

Subcommands: scm, spectral, shrink, truncate, eval, baiyin. Every
subcommand is a thin adapter over the library; no numerics live here.
Exit codes: 0 ok, 1 usage, 2 parse/validation, 3 numerical.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

from . import harness, regularizers, serialize
from .covariance import SampleCovariance, sample_covariance, spectral_decompose
from .errors import NumericalError, ValidationError
from .factors import dense
from .panels import demean, load_panel

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_scm(args) -> SampleCovariance:
    if getattr(args, "from_matrix", False):
        m = serialize.matrix_from_csv(_read_text(args.input))
        return SampleCovariance.from_matrix(m)
    panel = load_panel(
        io.StringIO(_read_text(args.input)), header=not args.no_header
    )
    return sample_covariance(demean(panel))


def _build_target(scm: SampleCovariance, args):
    if args.target == "diagonal":
        return regularizers.diagonal_target(scm)
    rho = regularizers.estimate_rho(scm) if args.rho == "auto" else float(args.rho)
    return regularizers.constant_correlation_target(scm, rho)


def _cmd_scm(args) -> None:
    scm = _load_scm(args)
    if args.json:
        _write(serialize.dumps(serialize.matrix_to_json_dict(scm.c)) + "\n",
               args.output)
    else:
        _write(serialize.matrix_to_csv(scm.c), args.output)


def _cmd_spectral(args) -> None:
    m = serialize.matrix_from_csv(_read_text(args.input))
    spectral = spectral_decompose(SampleCovariance.from_matrix(m))
    _write(serialize.dumps(serialize.spectral_to_json_dict(spectral)) + "\n",
           args.output)


def _cmd_shrink(args) -> None:
    scm = _load_scm(args)
    spectral = spectral_decompose(scm)
    spec = regularizers.ShrinkageSpec(q=args.q, target=_build_target(scm, args))
    dense_out = regularizers.shrink_dense(scm, spec)
    model = regularizers.shrink_as_factor_model(spectral, spec)
    payload = {
        "dense": serialize.matrix_to_json_dict(dense_out),
        "factor_model": serialize.shrunk_to_json_dict(model),
    }
    if args.json:
        _write(serialize.dumps(payload) + "\n", args.output)
    else:
        _write(serialize.matrix_to_csv(dense_out), args.output)
        sys.stderr.write(serialize.dumps(payload["factor_model"]) + "\n")


def _cmd_truncate(args) -> None:
    scm = _load_scm(args)
    spectral = spectral_decompose(scm)
    target = _build_target(scm, args)
    model = regularizers.truncated_pc_model(scm, spectral, target, args.f_hat)
    payload = {
        "dense": serialize.matrix_to_json_dict(dense(model.base)),
        "factor_model": serialize.truncated_to_json_dict(model),
    }
    if args.json:
        _write(serialize.dumps(payload) + "\n", args.output)
    else:
        _write(serialize.matrix_to_csv(dense(model.base)), args.output)
        sys.stderr.write(serialize.dumps(payload["factor_model"]) + "\n")


def _parse_methods(specs: list[str]) -> list[harness.MethodConfig]:
    methods = []
    for raw in specs:
        tokens = raw.split(",")
        kind = tokens[0]
        parts = dict(kv.split("=", 1) for kv in tokens[1:] if "=" in kv)
        rho = parts.get("rho")
        methods.append(
            harness.MethodConfig(
                kind=kind,
                q=float(parts.get("q", 0.0)),
                f_hat=int(parts.get("f_hat", 0)),
                target_kind=parts.get("target", "diagonal"),
                rho=None if rho in (None, "auto") else float(rho),
            )
        )
    return methods


def _cmd_eval(args) -> None:
    panel = load_panel(
        io.StringIO(_read_text(args.input)), header=not args.no_header
    )
    methods = _parse_methods(args.method)
    report = harness.stability_experiment(panel, args.split, methods)
    if args.json:
        _write(report.to_json() + "\n", args.output)
    else:
        _write(report.to_table() + "\n", args.output)


def _cmd_baiyin(args) -> None:
    report = harness.bai_yin_check(args.n, args.m, args.trials, args.seed)
    _write(json.dumps(report.to_json_dict()) + "\n", args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covreg",
        description="Covariance regularization: shrinkage, factor models, truncated-PC",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_io(p, matrix_ok=False):
        p.add_argument("--input", "-i", required=True,
                       help="input path, or - for stdin")
        p.add_argument("--output", "-o", default=None,
                       help="output path, default stdout")
        p.add_argument("--no-header", action="store_true",
                       help="panel CSV has no header row; ids synthesized")
        p.add_argument("--json", action="store_true",
                       help="emit JSON instead of CSV")
        if matrix_ok:
            p.add_argument("--from-matrix", action="store_true",
                           help="input is a dense covariance CSV, not a panel")

    def add_target(p):
        p.add_argument("--target", choices=("diagonal", "constant_correlation"),
                       default="diagonal")
        p.add_argument("--rho", default="auto",
                       help="uniform correlation, or 'auto' to estimate")

    p = sub.add_parser("scm", help="panel -> sample covariance matrix")
    add_io(p)
    p.set_defaults(func=_cmd_scm)

    p = sub.add_parser("spectral", help="covariance CSV -> eigenpairs JSON")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_spectral)

    p = sub.add_parser("shrink", help="shrink toward a target; dense + factor form")
    add_io(p, matrix_ok=True)
    add_target(p)
    p.add_argument("--q", type=float, required=True, help="shrinkage constant in [0,1]")
    p.set_defaults(func=_cmd_shrink)

    p = sub.add_parser("truncate", help="truncated-PC regularizer")
    add_io(p, matrix_ok=True)
    add_target(p)
    p.add_argument("--f-hat", type=int, required=True, dest="f_hat",
                   help="number of principal components kept")
    p.set_defaults(func=_cmd_truncate)

    p = sub.add_parser("eval", help="train/test stability comparison")
    add_io(p)
    p.add_argument("--split", type=float, default=0.5)
    p.add_argument("--method", action="append", required=True,
                   help="e.g. shrink,q=0.5,target=diagonal or truncated_pc,f_hat=1"
                        " (repeatable)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("baiyin", help="Monte Carlo eigenvalue edge check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_baiyin)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if getattr(args, "q", None) is not None and not 0.0 <= args.q <= 1.0:
            raise ValidationError(f"--q must be in [0, 1], got {args.q}")
        if getattr(args, "f_hat", None) is not None and args.f_hat < 0:
            raise ValidationError(f"--f-hat must be >= 0, got {args.f_hat}")
        if getattr(args, "split", None) is not None and not 0.0 < args.split < 1.0:
            raise ValidationError(f"--split must be in (0, 1), got {args.split}")
        args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except NumericalError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
