"""Command-line interface: ``margincount count|sample|ehrhart``.

Exit codes: 0 success, 1 input error, 2 infeasible margins when sampling.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import MarginSpec
from .ehrhart import SUPPORTED_N, dimensions, ehrhart_polynomial, h_value
from .enumeration import Mode, count
from .sample import InfeasibleError, RandomSource, draw, prepare


class InputError(ValueError):
    pass


def parse_terms(text: str) -> list[int]:
    """Parse ``"70 30 5^6 2^60"``; ``x^k`` means ``x`` repeated ``k`` times."""
    out: list[int] = []
    for term in text.split():
        value, sep, reps = term.partition("^")
        try:
            x = int(value)
            k = int(reps) if sep else 1
        except ValueError:
            raise InputError(f"bad margin term {term!r}") from None
        if x < 0 or k < 1 or (sep and not reps):
            raise InputError(f"bad margin term {term!r}")
        out.extend([x] * k)
    return out


def parse_margin_file(text: str) -> MarginSpec:
    """Read ``rows:`` and ``cols:`` lines; repeated lines are concatenated."""
    found: dict[str, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("rows", "cols"):
            raise InputError(f"line {lineno}: expected 'rows:' or 'cols:'")
        found.setdefault(key, []).extend(parse_terms(rest))
    missing = [k for k in ("rows", "cols") if k not in found]
    if missing:
        raise InputError(f"margin file has no {' or '.join(missing)} line")
    return MarginSpec(found["rows"], found["cols"])


def _margins(args) -> MarginSpec:
    if args.file is not None:
        if args.rows is not None or args.cols is not None:
            raise InputError("give either --file or --rows/--cols, not both")
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
        return parse_margin_file(text)
    if args.rows is None or args.cols is None:
        raise InputError("margins need --file or both --rows and --cols")
    return MarginSpec(parse_terms(args.rows), parse_terms(args.cols))


def cmd_count(args, out, err) -> int:
    spec = _margins(args)
    total, table = count(spec, args.mode)
    print(total, file=out)
    if args.stats:
        st = table.stats
        print(f"nodes={st.nodes} terms={st.terms} pruned={st.pruned} "
              f"elapsed_ms={st.elapsed_ms:.1f}", file=err)
    return 0


def cmd_sample(args, out, err) -> int:
    spec = _margins(args)
    if args.num < 0:
        raise InputError("--num must be non-negative")
    try:
        ctx = prepare(spec, args.mode)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=err)
        return 2
    rng = RandomSource(args.seed)
    for k in range(args.num):
        matrix = draw(ctx, rng)
        if args.format == "jsonl":
            out.write(json.dumps(matrix, separators=(",", ":")) + "\n")
        else:
            if k:
                out.write("\n")
            for row in matrix:
                out.write(",".join(map(str, row)) + "\n")
    return 0


def cmd_ehrhart(args, out, err) -> int:
    n = args.n
    if n not in SUPPORTED_N and not (args.force and n >= 2):
        raise InputError(f"--n must be in {SUPPORTED_N.start}..{SUPPORTED_N.stop - 1} (use --force above that)")
    k, _ = dimensions(n)
    values = [1]
    for r in range(1, k + 1):
        values.append(h_value(n, r))
        print(f"H_{n}({r}) = {values[r]}", file=out, flush=True)
    if not args.values_only:
        poly = ehrhart_polynomial(n, values)
        for j, c in enumerate(poly.coefficients):
            print(f"r^{j}: {c.numerator}/{c.denominator}", file=out)
    return 0


def _add_margin_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", required=True, choices=[m.value for m in Mode])
    p.add_argument("--file", help="margin file with 'rows:' and 'cols:' lines")
    p.add_argument("--rows", help='row sums, e.g. "70 30 5^6"')
    p.add_argument("--cols", help='column sums, e.g. "4^80 3^20"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="margincount",
                                     description="Count and sample matrices with given row and column sums.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact number of matrices")
    _add_margin_args(p)
    p.add_argument("--stats", action="store_true", help="print memo statistics to stderr")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sample", help="uniform random matrices")
    _add_margin_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num", type=int, default=1)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ehrhart", help="Ehrhart polynomial of the n x n Birkhoff polytope")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--values-only", action="store_true")
    p.add_argument("--force", action="store_true", help="allow n above 8")
    p.set_defaults(func=cmd_ehrhart)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.func(args, out, err)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
