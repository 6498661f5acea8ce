"""Compare the horizontal-partition protocols on one synthetic dataset.

Reproduces the shape of the horizontal comparison experiments: every
protocol runs on the same partitioned instance and reports words, rounds,
and recovered points.

Usage: python scripts/compare_horizontal.py [indi|corr|anti] [n] [s]
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from distsky.cli import RunConfig, rows_to_csv, run_experiment


def main() -> None:
    kind = sys.argv[1] if len(sys.argv) > 1 else "anti"
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 100_000
    s = int(sys.argv[3]) if len(sys.argv) > 3 else 20
    config = RunConfig(
        data=kind,
        n=n,
        s=s,
        algs=("naive", "optimal", "tradeoff", "agids", "fds"),
        r=3,
        grid=20,
        kappa=1,
        ell=1,
        seed=0,
    )
    rows = run_experiment(config)
    print(rows_to_csv(rows), end="")
    naive = next(r for r in rows if r.alg == "naive")
    for row in rows:
        print(f"# {row.alg:10s} words/naive = {row.words / naive.words:.2f}  rounds = {row.rounds}")


if __name__ == "__main__":
    main()
