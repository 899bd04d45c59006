"""Command line: solve, check, verify, gen, bench."""
from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from .gen import MODES, GenConfig, bench_config, gen_instance
from .graph import GraphError, NotEulerianError, Witness, verify_solution
from .io import (
    FormatError, parse_solution, read_instance, render_instance, render_solution,
    render_witness, solution_from_nodes,
)
from .solver import check_feasible, solve

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2

BENCH_SIZES = tuple(2 ** k for k in range(16, 22))


class InputError(Exception):
    pass


def _load(path):
    try:
        inst = read_instance(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (FormatError, GraphError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return inst


def _not_eulerian(exc: NotEulerianError) -> InputError:
    return InputError(f"instance is not Eulerian: node {exc.node + 1} has odd degree in G + H")


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    try:
        out = solve(inst)
    except NotEulerianError as exc:
        raise _not_eulerian(exc) from None
    if isinstance(out, Witness):
        sys.stdout.write("INFEASIBLE\n" + render_witness(out))
        return EXIT_INFEASIBLE
    sys.stdout.write("FEASIBLE\n" + render_solution(out))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = _load(args.instance)
    try:
        w = check_feasible(inst)
    except NotEulerianError as exc:
        raise _not_eulerian(exc) from None
    print("FEASIBLE" if w is None else "INFEASIBLE")
    return EXIT_OK if w is None else EXIT_INFEASIBLE


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    try:
        with open(args.solution) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.solution}: {exc.strerror}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if lines and lines[0].strip() == "FEASIBLE":
        text = "\n".join(lines[1:])
    try:
        node_paths = parse_solution(text, inst.graph.n)
    except FormatError as exc:
        raise InputError(f"{args.solution}: {exc}") from None
    ok = len(node_paths) == len(inst.demands)
    if ok:
        sol = solution_from_nodes(inst.graph, node_paths)
        ok = sol is not None and verify_solution(inst, sol)
    print("OK" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    try:
        cfg = GenConfig(nodes=args.nodes, cycles=args.cycles, edges=args.edges, seed=args.seed,
                        mode=args.mode, clusters=args.clusters, bridges=args.bridges, span=args.span)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = render_instance(gen_instance(cfg), comment=f"gen mode={cfg.mode} seed={cfg.seed}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def loglog_slope(ms, seconds) -> float:
    return float(np.polyfit(np.log(ms), np.log(seconds), 1)[0])


def time_solve(m: int, seed: int, runs: int, span: int = 256) -> float:
    """Median wall time of ``solve`` on one generated instance."""
    inst = gen_instance(bench_config(m, seed, span=span))
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        solve(inst)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cmd_bench(args) -> int:
    sizes = [2 ** k for k in args.log_sizes] if args.log_sizes else list(BENCH_SIZES)
    time_solve(1024, 0, 1)  # compile kernels outside the timed region
    print("m,seconds")
    secs = []
    for m in sizes:
        t = statistics.median(time_solve(m, seed, args.runs, args.span) for seed in args.seeds)
        secs.append(t)
        print(f"{m},{t:.6f}", flush=True)
    if len(sizes) > 1:
        print(f"# loglog_slope={loglog_slope(sizes, secs):.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="edp3", description="Three edge-disjoint paths in Eulerian instances.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="print three paths or a violated cut")
    s.add_argument("instance")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check", help="print the verdict only")
    s.add_argument("instance")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("verify", help="check a solution file against an instance")
    s.add_argument("instance")
    s.add_argument("solution")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="write a random Eulerian instance")
    s.add_argument("--nodes", type=int, default=8)
    s.add_argument("--cycles", type=int, default=1)
    s.add_argument("--edges", type=int, default=10, help="base edges in random mode")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=MODES, default="feasible")
    s.add_argument("--clusters", type=int, default=1, help="node blocks in random mode")
    s.add_argument("--bridges", type=int, default=0, help="edges between blocks in random mode")
    s.add_argument("--span", type=int, default=0, help="max step between node ids on walks (0 = any)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="time solve on growing feasible instances")
    s.add_argument("--log-sizes", type=int, nargs="+", metavar="K", help="sizes m = 2^K (default 16..21)")
    s.add_argument("--runs", type=int, default=5)
    s.add_argument("--seeds", type=int, nargs="+", default=[0])
    s.add_argument("--span", type=int, default=256, help="walk step window; 0 gives random expanders")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
