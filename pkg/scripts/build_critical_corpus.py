"""Search small random instances whose solve trace reaches the critical cut.

Writes tests/data/critical_corpus.json.  Run once; the file is then fixed.

    python3 scripts/build_critical_corpus.py [--want 40] [--want-b 12]
"""
import argparse
import json
from pathlib import Path

import numpy as np

from edp3 import GenConfig, SolveStats, Solution, gen_instance, solve, verify_solution

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "critical_corpus.json"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--want", type=int, default=40)
    ap.add_argument("--want-b", type=int, default=12)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("-o", "--output", default=str(OUT))
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    found, n_b, tried = [], 0, 0
    while len(found) < args.want or n_b < args.want_b:
        tried += 1
        seed = int(rng.integers(2**31))
        cfg = GenConfig(nodes=int(rng.integers(4, 11)), cycles=int(rng.integers(0, 4)), seed=seed)
        inst = gen_instance(cfg)
        st = SolveStats()
        out = solve(inst, st)
        if not st.reached_critical_cut:
            continue
        assert isinstance(out, Solution) and verify_solution(inst, out)
        if st.case == "A" and len(found) - n_b >= args.want - args.want_b:
            continue
        n_b += st.case == "B"
        _, us, vs = inst.graph.edge_arrays()
        found.append({
            "seed": seed, "nodes": cfg.nodes, "cycles": cfg.cycles,
            "n": inst.graph.n, "edges": [[u, v] for u, v in zip(us.tolist(), vs.tolist())],
            "pairs": [[d.s, d.t] for d in inst.demands],
            "case": st.case, "critical_index": st.critical_index, "path_length": st.path_length,
        })
    Path(args.output).write_text(json.dumps(found, indent=1) + "\n")
    print(f"{len(found)} instances ({n_b} in case B) from {tried} tries -> {args.output}")


if __name__ == "__main__":
    main()
