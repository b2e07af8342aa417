"""Command line interface: ``twopiece {eval,fit,sample,fanchart}``.

Exit codes: 0 success, 2 usage or domain error, 3 fit did not converge.
Errors are printed to stderr as a single ``<error-name>: <message>`` line.

Random numbers come from numpy's Philox4x64 counter-based generator seeded
with ``--seed``; the stream is stable across platforms.
"""
from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import estimation, fanchart
from .core import TwoPieceNormal
from .errors import DomainError, ParseError, TwoPieceError
from .families import FechnerFamily, split_normal, split_t

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3

_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


class _UsageError(TwoPieceError):
    name = "usage-error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def parse_number(text: str) -> float:
    """Parse a plain decimal number; rejects locale separators, inf and nan."""
    text = text.strip()
    if not _NUMBER.match(text):
        raise ParseError(f"not a number: {text!r}")
    return float(text)


def _number_arg(text: str) -> float:
    try:
        return parse_number(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def read_dataset(path) -> np.ndarray:
    """One value per line, or a single-column CSV; the first line may be a header."""
    values = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, line in enumerate(lines, start=1):
        cell = line.strip()
        if not cell:
            continue
        if "," in cell:
            raise ParseError(f"line {lineno}: expected a single column")
        try:
            values.append(parse_number(cell))
        except ParseError:
            if lineno == 1:
                continue  # header
            raise ParseError(f"line {lineno}: not a number: {cell!r}")
    if not values:
        raise ParseError(f"{path}: no values")
    return np.array(values)


def read_horizons(path) -> list[tuple]:
    """Rows ``label,mu,sigma1,sigma2``; an optional header row is skipped."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rowno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ParseError(f"row {rowno}: expected 4 fields, got {len(row)}")
            try:
                numbers = [parse_number(c) for c in row[1:]]
            except ParseError as exc:
                if rowno == 1:
                    continue
                raise ParseError(f"row {rowno}: {exc}")
            if not (numbers[1] > 0 and numbers[2] > 0):
                raise ParseError(f"row {rowno}: sigma1 and sigma2 must be positive")
            rows.append((row[0].strip(), *numbers))
    if not rows:
        raise ParseError(f"{path}: no horizons")
    return rows


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _add_family_args(p):
    p.add_argument("--family", choices=["tpn", "fechner", "split-normal", "split-t"], default="tpn")
    p.add_argument("--mu", type=_number_arg, default=0.0, help="mode (tpn, fechner)")
    p.add_argument("--s1", type=_number_arg, default=1.0, help="left scale (tpn)")
    p.add_argument("--s2", type=_number_arg, default=1.0, help="right scale (tpn)")
    p.add_argument("--sigma", type=_number_arg, default=1.0, help="right-piece scale (fechner)")
    p.add_argument("--M", type=_number_arg, default=1.0, help="skewness parameter (fechner)")
    p.add_argument("--a", type=_number_arg, default=2.0, help="tail exponent (fechner)")
    p.add_argument("--gamma", type=_number_arg, default=1.0, help="skewness (split)")
    p.add_argument("--nu", type=_number_arg, default=None, help="degrees of freedom (split-t)")
    p.add_argument("--location", type=_number_arg, default=0.0, help="location (split)")
    p.add_argument("--scale", type=_number_arg, default=1.0, help="scale (split)")


def _distribution(args):
    if args.family == "tpn":
        return TwoPieceNormal(args.mu, args.s1, args.s2)
    if args.family == "fechner":
        return FechnerFamily(args.mu, args.sigma, args.M, args.a)
    if args.family == "split-normal":
        return split_normal(args.gamma, args.location, args.scale)
    if args.nu is None:
        raise DomainError("split-t needs --nu")
    return split_t(args.nu, args.gamma, args.location, args.scale)


def cmd_eval(args, out) -> int:
    d = _distribution(args)
    if args.op == "moments":
        if isinstance(d, TwoPieceNormal):
            m = d.moments()
            items = [("mean", m.mean), ("variance", m.variance),
                     ("third_central_moment", m.third_central_moment),
                     ("kurtosis", m.kurtosis), ("mass_left", m.mass_left),
                     ("skew_ratio", m.skew_ratio)]
        else:
            items = [("mean", d.mean()), ("variance", d.variance()), ("mass_left", d.mass_left)]
        for key, value in items:
            print(f"{key}={_fmt(value)}", file=out)
        return EXIT_OK
    if args.at is None:
        raise _UsageError(f"--at is required for --op {args.op}")
    fn = {"pdf": d.pdf, "cdf": d.cdf, "quantile": d.quantile}[args.op]
    print(_fmt(fn(args.at)), file=out)
    return EXIT_OK


def cmd_fit(args, out) -> int:
    data = read_dataset(args.data)
    if args.method == "mm":
        result = estimation.fit_moments(data)
        if args.test_symmetry:
            result.symmetry_test = estimation.symmetry_test(data)
    else:
        result = estimation.fit_ml(data, test_symmetry=args.test_symmetry)

    d = result.params
    lines = [
        ("method", result.method),
        ("n", str(len(data))),
        ("mu", _fmt(d.mu)),
        ("sigma1", _fmt(d.sigma1)),
        ("sigma2", _fmt(d.sigma2)),
        ("converged", "true" if result.converged else "false"),
        ("iterations", str(result.iterations)),
    ]
    if result.log_likelihood is not None:
        lines.append(("log_likelihood", _fmt(result.log_likelihood)))
    if result.standard_errors is not None:
        for name, se in zip(("se_mu", "se_sigma1", "se_sigma2"), result.standard_errors):
            lines.append((name, _fmt(se)))
    if result.symmetry_test is not None:
        lines.append(("lr_statistic", _fmt(result.symmetry_test.statistic)))
        lines.append(("lr_p_value", _fmt(result.symmetry_test.p_value)))
    for key, value in lines:
        print(f"{key}={value}", file=out)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_sample(args, out) -> int:
    if args.n < 1:
        raise DomainError(f"--n must be at least 1, got {args.n}")
    d = _distribution(args)
    rng = np.random.Generator(np.random.Philox(args.seed))
    values = d.sample(rng, args.n)
    out.write("".join(f"{v:.17g}\n" for v in values))
    return EXIT_OK


def cmd_fanchart(args, out) -> int:
    rows = read_horizons(args.input)
    levels = [parse_number(t) for t in args.levels.split(",") if t.strip()]
    if not levels:
        raise DomainError("empty --levels list")
    chart = fanchart.fan_chart(rows, sorted(levels), args.band_mode)
    svg, csv_text = fanchart.render(fanchart.build_bandtable(chart))
    Path(args.out_svg).write_text(svg, encoding="utf-8", newline="\n")
    Path(args.out_csv).write_text(csv_text, encoding="utf-8", newline="\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twopiece", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate pdf, cdf, quantile or moments")
    _add_family_args(p)
    p.add_argument("--op", choices=["pdf", "cdf", "quantile", "moments"], required=True)
    p.add_argument("--at", type=_number_arg, help="point (pdf, cdf) or probability (quantile)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fit", help="fit a two-piece normal to a dataset")
    p.add_argument("data", help="file with one value per line (or single-column CSV)")
    p.add_argument("--method", choices=["mm", "ml"], default="ml")
    p.add_argument("--test-symmetry", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sample", help="draw pseudo-random values")
    _add_family_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fanchart", help="fan chart SVG and band CSV from a horizons file")
    p.add_argument("input", help="CSV rows label,mu,sigma1,sigma2")
    p.add_argument("--levels", default="0.3,0.6,0.9", help="comma-separated coverage levels")
    p.add_argument("--band-mode", choices=list(fanchart.BAND_MODES), default=fanchart.EQUAL_TAIL)
    p.add_argument("--out-svg", required=True)
    p.add_argument("--out-csv", required=True)
    p.set_defaults(func=cmd_fanchart)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except TwoPieceError as exc:
        message = " ".join(str(exc).split())
        print(f"{exc.name}: {message}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"io-error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
