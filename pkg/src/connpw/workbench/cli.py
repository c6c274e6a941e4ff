"""Command line for the connected pathwidth solver, oracle and workbench.

Exit codes: 0 success / positive decision, 1 negative decision or failed
verification, 2 usage or I/O error, 3 state cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from ..decomposition import DecompositionError, PathDecomposition, is_connected_decomposition, verify
from ..graph_core import GraphError, read_graph, to_list, write_graph
from ..oracle import CapExceeded, Infeasible, oracle_decide, oracle_decomposition, oracle_pathwidth
from ..structurer import parse_set, plan, apply_plan, is_structured
from ..xp_solver import (
    SolveRequest,
    SolverConfig,
    StateCapExceeded,
    XPSolver,
    check_witness,
    solve_cpw,
)
from .bench import run_bench
from .generators import FAMILIES, BadSpec, GeneratorSpec, default_corpus, generate, parse_params
from .suite import run_suite

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _max_states(args):
    if args.max_states is not None:
        return args.max_states
    env = os.environ.get("CONNPW_MAX_STATES")
    return int(env) if env else None


def _read_dec(path) -> PathDecomposition:
    with open(path) as fh:
        return PathDecomposition.from_json(fh.read())


def cmd_decide(args) -> int:
    g = read_graph(args.graph)
    solver = XPSolver(g, SolverConfig(max_states=_max_states(args)))
    seeds = [args.seed] if args.seed is not None else range(g.n)
    stats, hit = [], None
    for s in seeds:
        if not 0 <= s < g.n:
            raise UsageError(f"seed {s} outside 0..{g.n - 1}")
        req = SolveRequest(g, 1 << s, args.k)
        res = solver.run(req)
        stats.append({"seed": s, **res.stats.to_dict()})
        if res.decision:
            hit = (s, check_witness(g, req, res.witness))
            break
    _emit({
        "decision": hit is not None,
        "k": args.k,
        "seed": hit[0] if hit else None,
        "decomposition": hit[1].to_lists() if hit else None,
        "stats": stats,
    })
    return EXIT_OK if hit else EXIT_NO


def cmd_compute(args) -> int:
    g = read_graph(args.graph)
    res = solve_cpw(g, SolverConfig(max_states=_max_states(args), fast_paths=not args.no_fast_paths))
    _emit({
        "cpw": res.cpw,
        "seed": res.seed,
        "decomposition": res.decomposition.to_lists(),
        "per_k": {str(k): v for k, v in res.per_k.items()},
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    dec = _read_dec(args.dec)
    verdict = verify(g, dec)
    out = verdict.to_dict()
    out["connected"] = is_connected_decomposition(g, dec) if verdict.ok else None
    _emit(out)
    return EXIT_OK if verdict.ok else EXIT_NO


def cmd_transform(args) -> int:
    g = read_graph(args.graph)
    dec = _read_dec(args.dec)
    s = parse_set(args.set)
    if not s or s >> g.n:
        raise UsageError("--set must list vertex ids of the graph")
    if not verify(g, dec).ok:
        raise UsageError("input decomposition does not verify")
    if dec.width >= args.k:
        raise UsageError(f"width {dec.width} is not below k={args.k}")
    pl = plan(g, dec, s, args.k)
    out = apply_plan(dec, pl)
    _emit({
        "decomposition": out.to_lists(),
        "report": {
            "length_before": len(dec),
            "length_after": len(out),
            "d": pl.d,
            "c_min": pl.c_min,
            "interval_before": [pl.t1, pl.t2],
            "width_before": dec.width,
            "width_after": out.width,
            "valid": verify(g, out).ok,
            "structured": is_structured(g, out, s, args.k),
        },
    })
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    if args.pw:
        _emit({"pathwidth": oracle_pathwidth(g, cap=args.cap)})
        return EXIT_OK
    if args.k is None:
        raise UsageError("oracle needs --k or --pw")
    if args.seeds:
        candidates = [parse_set(args.seeds)]
    else:
        candidates = [1 << s for s in range(g.n)]
    for seeds in candidates:
        if oracle_decide(g, seeds, args.k, cap=args.cap):
            dec = oracle_decomposition(g, seeds, args.k, cap=args.cap)
            _emit({"decision": True, "k": args.k, "seeds": to_list(seeds), "decomposition": dec.to_lists()})
            return EXIT_OK
    _emit({"decision": False, "k": args.k, "seeds": None, "decomposition": None})
    return EXIT_NO


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.family, parse_params(args.params), args.seed)
    g = generate(spec)
    if args.out:
        write_graph(g, args.out)
    else:
        from ..graph_core import format_edge_list
        sys.stdout.write(format_edge_list(g))
    return EXIT_OK


def cmd_suite(args) -> int:
    corpus = default_corpus(args.max_n, args.seeds)
    if args.families:
        wanted = set(args.families.split(","))
        corpus = [c for c in corpus if c.family in wanted]
    config = SolverConfig(fast_paths=False, jump_budget_offset=args.mutant_offset)
    report = run_suite(corpus, args.max_n, config,
                       progress=(lambda s: print(s, file=sys.stderr)) if args.verbose else None)
    data = report.to_dict(with_timings=not args.no_timings)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
    _emit({"ok": report.ok, "summary": report.summary})
    return EXIT_OK if report.ok else EXIT_NO


def cmd_bench(args) -> int:
    specs = []
    for fam in args.families.split(","):
        for n in (int(x) for x in args.sizes.split(",")):
            if fam == "caterpillar":
                params = {"spine": max(1, n // 4), "legs_per": 3}
            elif fam == "spider":
                params = {"legs": max(1, (n - 1) // 2), "len": 2}
            elif fam == "star":
                params = {"leaves": n - 1}
            elif fam == "random_connected":
                params = {"n": n, "p_percent": 20}
            else:
                params = {"n": n}
            specs.append(GeneratorSpec(fam, params, args.seed))
    ks = [int(x) for x in args.k.split(",")]
    config = SolverConfig(max_states=_max_states(args))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            run_bench(specs, ks, fh, config)
    else:
        run_bench(specs, ks, sys.stdout, config)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="connpw", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="is cpw <= k-1 (bags of size <= k)?")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, help="fix the first-bag vertex")
    p.add_argument("--max-states", type=int)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("compute", help="exact connected pathwidth")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-states", type=int)
    p.add_argument("--no-fast-paths", action="store_true")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="check a decomposition JSON against a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--dec", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transform", help="apply the structuring transform for one set S")
    p.add_argument("--graph", required=True)
    p.add_argument("--dec", required=True)
    p.add_argument("--set", required=True, help="comma-separated vertex ids")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("oracle", help="brute-force decision or pathwidth")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--seeds")
    p.add_argument("--pw", action="store_true")
    p.add_argument("--cap", type=int, default=20)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a generated graph")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--params", default="")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", help="run the cross-validation suite")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--families")
    p.add_argument("--report")
    p.add_argument("--no-timings", action="store_true")
    p.add_argument("--mutant-offset", type=int, default=0, help=argparse.SUPPRESS)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("bench", help="state counts and timings as CSV")
    p.add_argument("--families", default="random_tree,caterpillar")
    p.add_argument("--sizes", default="10,15,20")
    p.add_argument("--k", default="3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--max-states", type=int)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except StateCapExceeded as exc:
        print(f"state cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, BadSpec, GraphError, DecompositionError, CapExceeded, Infeasible,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
