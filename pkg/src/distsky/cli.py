"""Experiment runner: generate or ingest data, partition it, run the chosen
protocols, verify against the sequential skyline, and emit plot-ready CSV.

Rows follow the fixed header
    alg,param,words,bits,messages,rounds,recovered,k,coord_ms,site_ms,verified
(sweeps append a `bound` column carrying s*k*(n/s)^(1/ceil(r/2)) for
tradeoff rows).  Output is deterministic for a fixed seed; wall-clock
timing columns are zero unless --timings is given, since real timings
would break byte-for-byte reproducibility.

Exit codes: 0 success, 1 usage/parameter error, 2 oracle verification
failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .baselines import run_agids, run_fds
from .core import Point, skyline
from .datagen import GenSpec, gen_synthetic, ingest_csv, partition
from .horizontal import HorizontalInstance, ParameterError, run_naive, run_optimal, run_sorted, run_tradeoff
from .vertical import run_prune, run_vertical_naive, vertical_split

HEADER = "alg,param,words,bits,messages,rounds,recovered,k,coord_ms,site_ms,verified"

HORIZONTAL_ALGS = ("naive", "optimal", "tradeoff", "sorted", "agids", "fds")
VERTICAL_ALGS = ("prune", "vertical-naive")


class VerificationError(RuntimeError):
    def __init__(self, alg: str, missing: set[int], extra: set[int]):
        super().__init__(f"{alg}: output disagrees with oracle (missing={sorted(missing)}, extra={sorted(extra)})")
        self.missing = missing
        self.extra = extra


@dataclass(frozen=True)
class RunConfig:
    data: str = "indi"  # indi | corr | anti | csv
    n: int = 100_000
    lines: int | None = None
    per_line: int | None = None
    csv_path: str | None = None
    x_col: str | None = None
    y_col: str | None = None
    negate_x: bool = False
    negate_y: bool = False
    dedupe: bool = False
    partition: str = "random"
    s: int = 20
    algs: tuple[str, ...] = ("naive",)
    r: int = 3
    rho: int = 500
    rounds: int = 8
    grid: int = 20
    kappa: int = 1
    ell: int = 1
    known_k: int | None = None
    seed: int = 0
    repeat: int = 1
    verify_cap: int = 100_000
    timings: bool = False
    transcript_dir: str | None = None


@dataclass
class Row:
    alg: str
    param: str
    words: int
    messages: int
    rounds: int
    recovered: int
    k: int
    coord_ms: float
    site_ms: float
    verified: str
    bound: float | None = None

    def csv(self, with_bound: bool = False) -> str:
        cells = [
            self.alg,
            self.param,
            str(self.words),
            str(self.words * 64),
            str(self.messages),
            str(self.rounds),
            str(self.recovered),
            str(self.k),
            f"{self.coord_ms:.3f}",
            f"{self.site_ms:.3f}",
            self.verified,
        ]
        if with_bound:
            cells.append("" if self.bound is None else f"{self.bound:.1f}")
        return ",".join(cells)


def _load_points(config: RunConfig, seed: int) -> list[Point]:
    if config.data == "csv":
        if not (config.csv_path and config.x_col and config.y_col):
            raise ParameterError("--csv requires --x-col and --y-col")
        return ingest_csv(
            config.csv_path,
            config.x_col,
            config.y_col,
            negate_x=config.negate_x,
            negate_y=config.negate_y,
            dedupe=config.dedupe,
        )
    spec = GenSpec(config.data, config.n, config.lines, config.per_line, seed)
    return gen_synthetic(spec)


def _alg_param(config: RunConfig, alg: str) -> str:
    if alg == "tradeoff":
        return f"r={config.r}"
    if alg == "prune":
        return f"rho={config.rho} r={config.rounds}"
    if alg == "agids":
        return f"g={config.grid}"
    if alg == "fds":
        return f"kappa={config.kappa} ell={config.ell}"
    return ""


def _run_alg(config: RunConfig, alg: str, horizontal: HorizontalInstance | None, points: list[Point]):
    if alg == "naive":
        return run_naive(horizontal)
    if alg == "optimal":
        return run_optimal(horizontal)
    if alg == "tradeoff":
        return run_tradeoff(horizontal, config.r, known_k=config.known_k)
    if alg == "sorted":
        return run_sorted(horizontal)
    if alg == "agids":
        return run_agids(horizontal, config.grid)
    if alg == "fds":
        return run_fds(horizontal, config.kappa, config.ell)
    if alg == "prune":
        return run_prune(vertical_split(points), config.rho, config.rounds)
    if alg == "vertical-naive":
        return run_vertical_naive(vertical_split(points))
    raise ParameterError(f"unknown algorithm {alg!r}")


def run_experiment(config: RunConfig) -> list[Row]:
    """One row per (algorithm, seed); with repeat > 1, mean/max rows follow."""
    rows: list[Row] = []
    per_alg: dict[str, list[Row]] = {alg: [] for alg in config.algs}
    for alg in config.algs:
        if alg not in HORIZONTAL_ALGS + VERTICAL_ALGS:
            raise ParameterError(f"unknown algorithm {alg!r}")
    for rep in range(config.repeat):
        seed = config.seed + rep
        points = _load_points(config, seed)
        horizontal = None
        if any(a in HORIZONTAL_ALGS for a in config.algs):
            horizontal = partition(points, config.partition, config.s, seed)
        oracle_ids = skyline(points).ids() if len(points) <= config.verify_cap else None
        for alg in config.algs:
            sky, transcript, report = _run_alg(config, alg, horizontal, points)
            if oracle_ids is not None:
                got = sky.ids()
                if got != oracle_ids:
                    raise VerificationError(alg, set(oracle_ids - got), set(got - oracle_ids))
                verified = "true"
            else:
                verified = "skipped"
            param = _alg_param(config, alg)
            if config.repeat > 1:
                param = f"{param} seed={seed}".strip()
            row = Row(
                alg=alg,
                param=param,
                words=report.total_words,
                messages=report.total_messages,
                rounds=report.rounds,
                recovered=report.recovered_points,
                k=len(sky),
                coord_ms=report.coordinator_time * 1e3 if config.timings else 0.0,
                site_ms=report.max_site_time * 1e3 if config.timings else 0.0,
                verified=verified,
            )
            rows.append(row)
            per_alg[alg].append(row)
            if config.transcript_dir:
                out = Path(config.transcript_dir)
                out.mkdir(parents=True, exist_ok=True)
                (out / f"{alg.replace('-', '_')}_{seed}.transcript").write_text(transcript.export())
    if config.repeat > 1:
        for alg in config.algs:
            group = per_alg[alg]
            base = _alg_param(config, alg)
            for tag, pick in (("mean", lambda v: sum(v) / len(v)), ("max", max)):
                rows.append(
                    Row(
                        alg=alg,
                        param=f"{base} {tag}".strip(),
                        words=round(pick([r.words for r in group])),
                        messages=round(pick([r.messages for r in group])),
                        rounds=round(pick([r.rounds for r in group])),
                        recovered=round(pick([r.recovered for r in group])),
                        k=round(pick([r.k for r in group])),
                        coord_ms=0.0,
                        site_ms=0.0,
                        verified="true" if all(r.verified == "true" for r in group) else "skipped",
                    )
                )
    return rows


SWEEPABLE = ("r", "rho", "rounds", "grid", "kappa", "ell", "s", "n")


def sweep(config: RunConfig, parameter: str, values: Sequence[int]) -> list[Row]:
    """One run per value; tradeoff rows carry the theoretical word bound."""
    if parameter not in SWEEPABLE:
        raise ParameterError(f"cannot sweep {parameter!r} (one of {SWEEPABLE})")
    rows: list[Row] = []
    for value in values:
        sub = replace(config, **{parameter: value})
        for row in run_experiment(sub):
            row = replace_row_param(row, f"{parameter}={value}")
            if row.alg == "tradeoff":
                t = math.ceil(sub.r / 2)
                row.bound = sub.s * row.k * (sub.n / sub.s) ** (1.0 / t)
            rows.append(row)
    return rows


def replace_row_param(row: Row, prefix: str) -> Row:
    if prefix in row.param.split():
        return row
    row.param = f"{prefix} {row.param}".strip() if row.param else prefix
    return row


def rows_to_csv(rows: Sequence[Row], with_bound: bool = False) -> str:
    header = HEADER + (",bound" if with_bound else "")
    return "\n".join([header] + [r.csv(with_bound) for r in rows]) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="distsky", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--data", default="indi", choices=["indi", "corr", "anti", "csv"])
        p.add_argument("--n", type=int, default=100_000)
        p.add_argument("--lines", type=int)
        p.add_argument("--per-line", type=int, dest="per_line")
        p.add_argument("--csv", dest="csv_path")
        p.add_argument("--x-col", dest="x_col")
        p.add_argument("--y-col", dest="y_col")
        p.add_argument("--negate-x", action="store_true", dest="negate_x")
        p.add_argument("--negate-y", action="store_true", dest="negate_y")
        p.add_argument("--dedupe", action="store_true")
        p.add_argument("--partition", default="random", choices=["random", "by-key", "sorted"])
        p.add_argument("--s", type=int, default=20)
        p.add_argument("--alg", default="naive", help="comma-separated protocol names")
        p.add_argument("--r", type=int, default=3, help="tradeoff round budget")
        p.add_argument("--rho", type=int, default=500, help="prune group count")
        p.add_argument("--rounds", type=int, default=8, help="prune round budget")
        p.add_argument("--grid", type=int, default=20)
        p.add_argument("--kappa", type=int, default=1)
        p.add_argument("--ell", type=int, default=1)
        p.add_argument("--known-k", type=int, dest="known_k")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--repeat", type=int, default=1)
        p.add_argument("--verify-cap", type=int, default=100_000, dest="verify_cap")
        p.add_argument("--timings", action="store_true")
        p.add_argument("--export-transcript", dest="transcript_dir")
        p.add_argument("--out", help="write CSV here instead of stdout")
        if name == "sweep":
            p.add_argument("--param", required=True, choices=SWEEPABLE)
            p.add_argument("--values", required=True, help="comma-separated values")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.csv_path:
        args.data = "csv"
    return RunConfig(
        data=args.data,
        n=args.n,
        lines=args.lines,
        per_line=args.per_line,
        csv_path=args.csv_path,
        x_col=args.x_col,
        y_col=args.y_col,
        negate_x=args.negate_x,
        negate_y=args.negate_y,
        dedupe=args.dedupe,
        partition=args.partition,
        s=args.s,
        algs=tuple(a.strip() for a in args.alg.split(",") if a.strip()),
        r=args.r,
        rho=args.rho,
        rounds=args.rounds,
        grid=args.grid,
        kappa=args.kappa,
        ell=args.ell,
        known_k=args.known_k,
        seed=args.seed,
        repeat=args.repeat,
        verify_cap=args.verify_cap,
        timings=args.timings,
        transcript_dir=args.transcript_dir,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
        if args.command == "run":
            rows = run_experiment(config)
            text = rows_to_csv(rows)
        else:
            values = [int(v) for v in args.values.split(",")]
            rows = sweep(config, args.param, values)
            text = rows_to_csv(rows, with_bound=True)
    except SystemExit as exc:
        return int(exc.code or 0)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
