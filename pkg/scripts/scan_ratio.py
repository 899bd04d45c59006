"""Measure j-search scans against r*m on inflated corpus instances.

Small sizes were used to fix the constant C in the acceptance test; larger
sizes show the ratio does not grow.

    python3 scripts/scan_ratio.py [--log-sizes 10 11 12] [--count 8]
"""
import argparse
import sys
from pathlib import Path

from edp3 import SolveStats, solve
from edp3.gen import inflate

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import load_corpus  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--log-sizes", type=int, nargs="+", default=[10, 11, 12])
    ap.add_argument("--count", type=int, default=8, help="corpus instances per size")
    ap.add_argument("--subdivide", type=int, default=64)
    args = ap.parse_args()

    corpus = load_corpus()
    print("m,instance,scans,budget,ratio")
    worst = 0.0
    for k in args.log_sizes:
        for i, (_, inst) in enumerate(corpus[: args.count]):
            stats = SolveStats()
            solve(inflate(inst, 2**k, seed=i, subdivide=args.subdivide), stats)
            if not stats.jsearch_budget:
                continue
            ratio = stats.jsearch_scans / stats.jsearch_budget
            worst = max(worst, ratio)
            print(f"{2**k},{i},{stats.jsearch_scans},{stats.jsearch_budget},{ratio:.3f}")
    print(f"# max_ratio={worst:.3f}")


if __name__ == "__main__":
    main()
