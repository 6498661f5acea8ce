"""Sweep the interactive-pruning group count and print the cost curve.

The communication cost against rho typically traces a U: huge groups waste
recovered points, while very fine groups pay for their own split
coordinates and weak prune lines.

Usage: python scripts/sweep_rho.py [indi|corr|anti] [n] [r]
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from distsky.cli import RunConfig, rows_to_csv, sweep


def main() -> None:
    kind = sys.argv[1] if len(sys.argv) > 1 else "anti"
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 100_000
    r = int(sys.argv[3]) if len(sys.argv) > 3 else 8
    config = RunConfig(data=kind, n=n, algs=("prune",), rounds=r, seed=0)
    rows = sweep(config, "rho", [10, 100, 1_000, 10_000, 100_000])
    print(rows_to_csv(rows, with_bound=True), end="")
    words = [row.words for row in rows]
    best = words.index(min(words))
    print(f"# minimum words at rho = {rows[best].param.split()[0].split('=')[1]}")


if __name__ == "__main__":
    main()
