"""Command-line front end: ``pdrqa generate|lines|rqa|oracle|converge|verify``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import oracle, verify
from .pdseq import (pd_prefix_substitution, pd_prefix_toeplitz,
                    pd_prefix_valuation, word_str)
from .rplines import diagonal_histogram, lmax, vertical_histogram
from .rqa import eps_to_embedding, quantify

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

DEFAULT_SCHEDULE = [2 ** k for k in range(8, 14)]
DEFAULT_LENGTHS = [1, 2, 3, 5, 7, 11, 15, 23]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 2 ** 13
    m: int = 1
    lmin: int = 1
    eps: Optional[float] = None
    schedule: List[int] = field(default_factory=lambda: list(DEFAULT_SCHEDULE))
    lengths: List[int] = field(default_factory=lambda: list(DEFAULT_LENGTHS))
    kind: str = "diagonal"
    check: bool = False
    grid: int = 512
    output_format: str = "csv"
    output_path: Optional[str] = None
    threads: int = 1

    @property
    def effective_m(self) -> int:
        return self.m if self.eps is None else eps_to_embedding(self.eps, self.m)

    def metadata(self) -> dict:
        # output path and thread count are left out so results compare byte for byte
        meta = {"command": self.command, "m": self.m, "m_effective": self.effective_m,
                "eps": self.eps, "lmin": self.lmin}
        if self.command == "converge":
            meta["schedule"] = list(self.schedule)
        else:
            meta["n"] = self.n
        if self.command in ("converge", "oracle"):
            meta["lengths"] = list(self.lengths)
        if self.command == "lines":
            meta["kind"] = self.kind
        return meta


def fmt_rational(q: Optional[Fraction]) -> Optional[str]:
    if q is None:
        return None
    return f"{q.numerator}/{q.denominator}"


def fmt_float(v) -> Optional[float]:
    if v is None:
        return None
    return float(v)


def rel_err(value, target) -> Optional[float]:
    if value is None or target is None or target == 0:
        return None
    return fmt_float(abs(float(value) - float(target)) / abs(float(target)))


def _put_rational(row: dict, key: str, value: Optional[Fraction]) -> None:
    row[key] = fmt_rational(value)
    row[key + "_float"] = fmt_float(value)


# ---------------------------------------------------------------------------
# table builders

def oracle_table(config: RunConfig) -> dict:
    m = config.effective_m
    rows = []
    for length in config.lengths:
        row = {"length": length, "m": m}
        p = oracle.params(length + m - 1)
        row.update(k=p.k, a=p.a, case=p.case)
        _put_rational(row, "dens", oracle.dens_asymptotic(length + m - 1))
        _put_rational(row, "denss", oracle.denss_asymptotic(length + m - 1))
        _put_rational(row, "rr", oracle.rr(m, length))
        _put_rational(row, "det", oracle.det(m, length))
        _put_rational(row, "lavg", oracle.lavg(m, length))
        _put_rational(row, "rr_embedded", oracle.rr_embedded(m, length))
        _put_rational(row, "det_embedded", oracle.det_embedded(m, length))
        _put_rational(row, "lavg_embedded", oracle.lavg_embedded(m, length))
        row["entr"] = fmt_float(oracle.entr(m, length))
        row["det_class"] = oracle.det_class(m, length).value if length >= 2 else None
        rows.append(row)
    return {"config": config.metadata(), "rows": rows, "oracle": None}


def _oracle_summary(m: int, lmin: int, lengths) -> dict:
    out = {"rr": fmt_rational(oracle.rr(m, lmin)),
           "det": fmt_rational(oracle.det(m, lmin)),
           "lavg": fmt_rational(oracle.lavg(m, lmin)),
           "rr_embedded": fmt_rational(oracle.rr_embedded(m, lmin)),
           "det_embedded": fmt_rational(oracle.det_embedded(m, lmin)),
           "lavg_embedded": fmt_rational(oracle.lavg_embedded(m, lmin)),
           "entr": fmt_float(oracle.entr(m, lmin))}
    for length in lengths:
        out[f"dens_{length}"] = fmt_rational(oracle.dens_asymptotic(length + m - 1))
    return out


def _quantifier_row(report, m: int, lengths) -> dict:
    row = {"n": report.n}
    # finite plots converge to the embedded limits (equal to the closed forms at m = 1)
    targets = {"rr": oracle.rr_embedded(m, report.lmin),
               "det": oracle.det_embedded(m, report.lmin),
               "lavg": oracle.lavg_embedded(m, report.lmin)}
    for key in ("rr", "det", "lavg"):
        value = getattr(report, key)
        _put_rational(row, key, value)
        _put_rational(row, key + "_oracle", targets[key])
        row[key + "_relerr"] = rel_err(value, targets[key])
    row["entr"] = fmt_float(report.entr)
    row["entr_oracle"] = fmt_float(oracle.entr(m, report.lmin))
    row["entr_relerr"] = rel_err(report.entr, oracle.entr(m, report.lmin))
    row["lmax"] = report.lmax
    for length in lengths:
        value = report.dens.get(length, Fraction(0))
        target = oracle.dens_asymptotic(length + m - 1)
        _put_rational(row, f"dens_{length}", value)
        _put_rational(row, f"dens_{length}_oracle", target)
        row[f"dens_{length}_relerr"] = rel_err(value, target)
    return row


def converge_table(config: RunConfig) -> dict:
    schedule = list(config.schedule)
    if not schedule:
        raise UsageError("schedule must be nonempty")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise UsageError("schedule must be strictly increasing")
    if schedule[0] < config.lmin + 2:
        raise UsageError(
            f"n={schedule[0]} < lmin+2={config.lmin + 2}: no lines of length >= lmin can exist")
    m = config.effective_m
    x = pd_prefix_substitution(schedule[-1] + m - 1)
    rows = []
    for n in schedule:
        hist = diagonal_histogram(x, n, m, threads=config.threads)
        rows.append(_quantifier_row(quantify(hist, config.lmin), m, config.lengths))
    return {"config": config.metadata(), "rows": rows,
            "oracle": _oracle_summary(m, config.lmin, config.lengths)}


def rqa_table(config: RunConfig) -> dict:
    if config.n < max(2, config.lmin):
        raise UsageError("n must be >= 2")
    m = config.effective_m
    x = pd_prefix_substitution(config.n + m - 1)
    report = quantify(diagonal_histogram(x, config.n, m, threads=config.threads),
                      config.lmin)
    return {"config": config.metadata(),
            "rows": [_quantifier_row(report, m, config.lengths)],
            "oracle": _oracle_summary(m, config.lmin, config.lengths)}


def lines_table(config: RunConfig) -> dict:
    if config.n < 2:
        raise UsageError("n must be >= 2")
    m = config.effective_m
    x = pd_prefix_substitution(config.n + m - 1)
    if config.kind == "vertical":
        hist = vertical_histogram(x, config.n, m)
    else:
        hist = diagonal_histogram(x, config.n, m, threads=config.threads)
    rows = [{"length": length, "count": count,
             "allowed": oracle.is_allowed_length(length)}
            for length, count in hist.counts.items()]
    meta = config.metadata()
    meta["lmax"] = lmax(hist)
    return {"config": meta, "rows": rows, "oracle": None}


# ---------------------------------------------------------------------------
# output

def render(table: dict, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(table, indent=2, sort_keys=False) + "\n"
    rows = table["rows"]
    columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row[c] is None else
                         (f"{row[c]:.17g}" if isinstance(row[c], float) else row[c])
                         for c in columns])
    return buf.getvalue()


def emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def generate_text(config: RunConfig) -> tuple[str, bool]:
    if config.n < 1:
        raise UsageError("n must be >= 1")
    word = pd_prefix_substitution(config.n)
    text = word_str(word) + "\n"
    if not config.check:
        return text, True
    others = {"toeplitz": pd_prefix_toeplitz(config.n),
              "valuation": pd_prefix_valuation(config.n)}
    agree = all(np.array_equal(word, w) for w in others.values())
    lines = [f"substitution {word_str(word)}"]
    lines += [f"{name} {word_str(w)}" for name, w in others.items()]
    lines.append("AGREE" if agree else "DISAGREE")
    return "\n".join(lines) + "\n", agree


def run_verify(config: RunConfig, word=None, out=None) -> int:
    out = sys.stdout if out is None else out
    results = verify.run_suites(word, grid=config.grid)
    for res in results:
        status = "ok" if res.ok else "FAIL"
        print(f"{res.name}: {status} ({res.seconds:.2f}s)", file=out)
        if not res.ok:
            print(f"counterexample: {res.counterexample}", file=out)
            print(f"FAIL {res.name}", file=out)
            return EXIT_VERIFY
    print("PASS", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2 ** 13, help="plot size")
    common.add_argument("--m", type=int, default=1, help="embedding dimension")
    common.add_argument("--eps", type=float, default=None,
                        help="distance threshold; overrides --m via m + h_eps")
    common.add_argument("--lmin", type=int, default=1, help="minimal line length")
    common.add_argument("--schedule", type=_int_list, default=DEFAULT_SCHEDULE,
                        help="comma-separated plot sizes for converge")
    common.add_argument("--lengths", type=_int_list, default=DEFAULT_LENGTHS,
                        help="comma-separated line lengths to tabulate")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"),
                        default="csv")
    common.add_argument("--out", dest="output_path", default=None,
                        help="output file (default: stdout)")
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(
        prog="pdrqa",
        description="Recurrence quantification of the period-doubling sequence.")
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", parents=[common], help="write x_1..x_n")
    gen.add_argument("--check", action="store_true",
                     help="run all three generators and report agreement")
    lines = sub.add_parser("lines", parents=[common], help="line length histogram")
    lines.add_argument("--kind", choices=("diagonal", "vertical"), default="diagonal")
    sub.add_parser("rqa", parents=[common], help="finite-n quantifiers")
    sub.add_parser("oracle", parents=[common], help="asymptotic closed forms")
    sub.add_parser("converge", parents=[common], help="finite-n vs asymptotic table")
    ver = sub.add_parser("verify", parents=[common], help="run property suites")
    ver.add_argument("--grid", type=int, default=512)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command, n=args.n, m=args.m, lmin=args.lmin, eps=args.eps,
        schedule=args.schedule, lengths=args.lengths,
        kind=getattr(args, "kind", "diagonal"), check=getattr(args, "check", False),
        grid=getattr(args, "grid", 512), output_format=args.output_format,
        output_path=args.output_path, threads=args.threads)


def run(config: RunConfig) -> int:
    if config.m < 1 or config.lmin < 1 or config.threads < 1:
        raise UsageError("--m, --lmin and --threads must be positive")
    if config.eps is not None and not (config.eps > 0 and math.isfinite(config.eps)):
        raise UsageError("--eps must be a positive number")
    if any(length < 1 for length in config.lengths):
        raise UsageError("--lengths must be positive")
    if config.command == "verify":
        return run_verify(config)
    if config.command == "generate":
        text, ok = generate_text(config)
        emit(text, config.output_path)
        return EXIT_OK if ok else EXIT_VERIFY
    builders = {"lines": lines_table, "rqa": rqa_table, "oracle": oracle_table,
                "converge": converge_table}
    table = builders[config.command](config)
    emit(render(table, config.output_format), config.output_path)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(config_from_args(args))
    except UsageError as exc:
        print(f"pdrqa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pdrqa: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
