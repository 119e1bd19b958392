"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 malformed input, 3 undefined
index, 4 verification FAIL, 5 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .bounds import approx_min_ari, extremal_table, min_ari, normalized_ard, normalized_ard_from_ari
from .core import (
    ContingencyTable,
    PairCounts,
    adjusted_rand_distance,
    adjusted_rand_index,
    contingency_from_labels,
    expected_rand_index,
    format_decimal,
    format_fraction,
    pair_counts,
    rand_index,
)
from .errors import BudgetExceededError, InputError, UndefinedIndexError
from .oracle import DEFAULT_BUDGET, verify_theorem

log = logging.getLogger("arimin")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_UNDEFINED, EXIT_FAIL, EXIT_BUDGET = range(6)

RATIO_FIELDS = ("ri", "expected_ri", "ari", "ard", "min_ari", "normalized_ard")


class ParseError(InputError):
    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


def _open_text(path: str):
    if path == "-":
        return io.StringIO(sys.stdin.read())
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def read_labels(path: str) -> list[str]:
    """One label token per line; surrounding whitespace is trimmed."""
    labels = []
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            token = line.strip()
            if not token:
                raise ParseError(path, lineno, "blank line where a label was expected")
            labels.append(token)
    if not labels:
        raise ParseError(path, 1, "no labels found")
    return labels


def read_labels_csv(path: str) -> dict[str, str]:
    """Two-column ``id,label`` CSV; an ``id,label`` header row is skipped."""
    out: dict[str, str] = {}
    with _open_text(path) as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ParseError(path, lineno, f"expected 2 columns (id,label), got {len(row)}")
            key, label = row[0].strip(), row[1].strip()
            if lineno == 1 and (key.lower(), label.lower()) == ("id", "label"):
                continue
            if not key or not label:
                raise ParseError(path, lineno, "empty id or label")
            if key in out:
                raise ParseError(path, lineno, f"duplicate id {key!r}")
            out[key] = label
    if not out:
        raise ParseError(path, 1, "no rows found")
    return out


def parse_table_text(text: str, source: str = "<table>") -> ContingencyTable:
    """Whitespace-separated counts, one row per line; ``#`` comments and blank lines ignored.

    A JSON list of rows, or an object with a ``table`` key, is accepted too.
    """
    stripped = text.lstrip()
    if stripped.startswith(("[", "{")):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(source, exc.lineno, f"invalid JSON: {exc.msg}") from None
        rows = doc.get("table") if isinstance(doc, dict) else doc
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError(source, 1, "JSON table must be a list of rows")
        for row in rows:
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in row):
                raise ParseError(source, 1, "JSON table entries must be integers")
        return ContingencyTable.from_rows(rows)

    rows, width = [], None
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            row = [int(tok) for tok in body.split()]
        except ValueError:
            raise ParseError(source, lineno, f"non-integer entry in {body!r}") from None
        if any(v < 0 for v in row):
            raise ParseError(source, lineno, "negative count")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(source, lineno, f"row has {len(row)} entries, expected {width}")
        if sum(row) == 0:
            raise ParseError(source, lineno, "row is all zeros (empty cluster)")
        rows.append(row)
    if not rows:
        raise ParseError(source, 1, "no table rows found")
    return ContingencyTable.from_rows(rows)


def read_table(path: str) -> ContingencyTable:
    with _open_text(path) as fh:
        return parse_table_text(fh.read(), source=path)


@dataclass
class ComparisonReport:
    n: int
    r: int
    s: int
    table: ContingencyTable
    pair_counts: PairCounts
    ri: Fraction
    expected_ri: Fraction
    ari: Fraction
    ard: Fraction
    min_ari: Fraction
    normalized_ard: Fraction
    warnings: list = field(default_factory=list)

    def to_dict(self, precision: Optional[int] = 6) -> dict:
        p = self.pair_counts
        out = {
            "n": self.n,
            "r": self.r,
            "s": self.s,
            "table": self.table.tolist(),
            "pair_counts": {"a": p.a, "b": p.b, "c": p.c, "d": p.d, "N": p.N},
        }
        for name in RATIO_FIELDS:
            out[name] = _ratio_json(getattr(self, name), precision)
        out["warnings"] = list(self.warnings)
        return out


def _ratio_json(x: Fraction, precision: Optional[int]) -> dict:
    return {
        "exact": format_fraction(x),
        "decimal": None if precision is None else format_decimal(x, precision),
    }


def _show(x: Fraction, precision: Optional[int]) -> str:
    if precision is None:
        return format_fraction(x)
    return f"{format_fraction(x)} ({format_decimal(x, precision)})"


def compare_tables(table: ContingencyTable) -> ComparisonReport:
    counts = pair_counts(table)
    r, s = table.shape
    ari = adjusted_rand_index(counts)
    bound = min_ari(r, s)
    warnings = []
    if ari < bound:
        warnings.append(
            f"ARI {format_fraction(ari)} is below the closed-form value {format_fraction(bound)} "
            f"for sizes ({r}, {s}); normalized ARD exceeds 1"
        )
    return ComparisonReport(
        n=table.n,
        r=r,
        s=s,
        table=table,
        pair_counts=counts,
        ri=rand_index(counts),
        expected_ri=expected_rand_index(counts),
        ari=ari,
        ard=adjusted_rand_distance(counts),
        min_ari=bound,
        normalized_ard=normalized_ard(counts, r, s),
        warnings=warnings,
    )


def _table_from_args(args) -> ContingencyTable:
    if args.table is not None:
        if args.labels_a or args.labels_b:
            raise InputError("give either --table or --labels-a/--labels-b, not both")
        return read_table(args.table)
    if not (args.labels_a and args.labels_b):
        raise InputError("compare needs --table, or both --labels-a and --labels-b")
    if args.csv:
        a = read_labels_csv(args.labels_a)
        b = read_labels_csv(args.labels_b)
        if a.keys() != b.keys():
            missing = sorted(set(a) ^ set(b))[:5]
            raise InputError(f"CSV files have different ids, e.g. {missing}")
        keys = list(a)
        return contingency_from_labels([a[k] for k in keys], [b[k] for k in keys])
    a = read_labels(args.labels_a)
    b = read_labels(args.labels_b)
    if len(a) != len(b):
        raise InputError(f"label files differ in length ({len(a)} vs {len(b)})")
    return contingency_from_labels(a, b)


def _precision(args) -> Optional[int]:
    return None if args.exact else args.precision


def cmd_compare(args, out) -> int:
    table = _table_from_args(args)
    if table.n < 2:
        raise UndefinedIndexError("indices are undefined for fewer than two objects")
    report = compare_tables(table)
    prec = _precision(args)
    if args.format == "json":
        json.dump(report.to_dict(prec), out, indent=2)
        out.write("\n")
    else:
        p = report.pair_counts
        out.write(f"n               {report.n}\n")
        out.write(f"sizes           {report.r} x {report.s}\n")
        out.write("table\n")
        for row in report.table.entries:
            out.write("  " + " ".join(str(v) for v in row) + "\n")
        out.write(f"pairs           a={p.a} b={p.b} c={p.c} d={p.d} N={p.N}\n")
        for name in RATIO_FIELDS:
            out.write(f"{name:<16}{_show(getattr(report, name), prec)}\n")
    for w in report.warnings:
        log.warning(w)
    return EXIT_OK


def cmd_bound(args, out) -> int:
    r, s = args.r, args.s
    report = extremal_table(r, s)
    prec = _precision(args)
    approx = approx_min_ari(r, s) if min(r, s) >= 2 else None
    if args.format == "json":
        doc = {
            "r": r,
            "s": s,
            "min_ari": _ratio_json(report.min_ari, prec),
            "approx_min_ari": None if approx is None else _ratio_json(approx, prec),
            "witness_n": report.witness_n,
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        out.write(f"min_ari     {_show(report.min_ari, prec)}\n")
        if approx is not None:
            out.write(f"approx      {_show(approx, prec)}\n")
        out.write(f"witness_n   {report.witness_n}\n")
    return EXIT_OK


def cmd_extremal(args, out) -> int:
    report = extremal_table(args.r, args.s)
    p = report.witness_pair_counts
    if args.format == "json":
        doc = {
            "r": report.r,
            "s": report.s,
            "n": report.witness_n,
            "table": report.witness.tolist(),
            "pair_counts": {"a": p.a, "b": p.b, "c": p.c, "d": p.d, "N": p.N},
            "ari": _ratio_json(report.min_ari, _precision(args)),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        out.write(f"# extremal table r={report.r} s={report.s} n={report.witness_n}\n")
        out.write(f"# a={p.a} b={p.b} c={p.c} d={p.d} ari={format_fraction(report.min_ari)}\n")
        for row in report.witness.entries:
            out.write(" ".join(str(v) for v in row) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    verdict = verify_theorem(
        args.r,
        args.s,
        args.n_max,
        zero_one_only=args.zero_one,
        budget=args.budget,
        workers=args.threads,
    )
    prec = _precision(args)
    if args.format == "json":
        doc = {
            "verdict": "PASS" if verdict.passed else "FAIL",
            "r": verdict.r,
            "s": verdict.s,
            "n_range": list(verdict.n_range),
            "zero_one_only": verdict.zero_one_only,
            "tables_scanned": verdict.tables_scanned,
            "oracle_min": _ratio_json(verdict.oracle_min, prec),
            "formula_min": _ratio_json(verdict.formula_min, prec),
            "n_at_optimum": list(verdict.n_at_optimum),
            "witnesses": verdict.witnesses,
            "checks": verdict.checks,
            "diagnostics": list(verdict.diagnostics),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        mode = "0/1 entries" if verdict.zero_one_only else "all tables"
        lo, hi = verdict.n_range
        out.write(f"{'PASS' if verdict.passed else 'FAIL'} r={verdict.r} s={verdict.s} n in [{lo}, {hi}] ({mode})\n")
        out.write(f"tables scanned  {verdict.tables_scanned}\n")
        out.write(f"oracle minimum  {_show(verdict.oracle_min, prec)}\n")
        out.write(f"closed form     {_show(verdict.formula_min, prec)}\n")
        out.write(f"minimum at n    {', '.join(map(str, verdict.n_at_optimum))}\n")
        out.write(f"witnesses       {verdict.witnesses}\n")
        for name, ok in verdict.checks.items():
            out.write(f"check {name:<14}{'ok' if ok else 'FAILED'}\n")
    for d in verdict.diagnostics:
        log.warning(d)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_normalize(args, out) -> int:
    result = normalized_ard_from_ari(args.ari, args.r, args.s)
    prec = _precision(args)
    if args.format == "json":
        doc = {
            "ari": _ratio_json(result.ari, prec),
            "r": args.r,
            "s": args.s,
            "min_ari": _ratio_json(result.min_ari, prec),
            "normalized_ard": _ratio_json(result.value, prec),
            "warnings": list(result.warnings),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        out.write(_show(result.value, prec) + "\n")
    for w in result.warnings:
        log.warning(w)
    return EXIT_OK


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--precision", type=_positive_int, default=6, help="significant digits for decimals")
    common.add_argument("--exact", action="store_true", help="print exact fractions only")

    parser = argparse.ArgumentParser(prog="arimin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="compare two clusterings")
    p.add_argument("--labels-a")
    p.add_argument("--labels-b")
    p.add_argument("--csv", action="store_true", help="label files are id,label CSV (joined by id)")
    p.add_argument("--table", help="contingency table file ('-' for stdin)")
    p.set_defaults(func=cmd_compare)

    for name, func, help_text in (
        ("bound", cmd_bound, "closed-form minimum ARI for sizes r, s"),
        ("extremal", cmd_extremal, "table attaining the closed-form minimum"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("r", type=_positive_int)
        p.add_argument("s", type=_positive_int)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="check the closed form by exhaustive search")
    p.add_argument("r", type=_positive_int)
    p.add_argument("s", type=_positive_int)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--zero-one", action="store_true", help="restrict entries to 0/1")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("normalize", parents=[common], help="normalized ARD of a reported ARI value")
    p.add_argument("ari", help="exact decimal or fraction, e.g. 0.81 or -5/13 (use -- before negatives)")
    p.add_argument("r", type=_positive_int)
    p.add_argument("s", type=_positive_int)
    p.set_defaults(func=cmd_normalize)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return args.func(args, out)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except UndefinedIndexError as exc:
        log.error("%s", exc)
        return EXIT_UNDEFINED
    except BudgetExceededError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
