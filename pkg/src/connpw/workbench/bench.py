"""State counts and wall time per (family, n, k), written as CSV."""
from __future__ import annotations

import csv
import time

from ..xp_solver import SolveRequest, SolverConfig, XPSolver
from .generators import GeneratorSpec, generate

FIELDS = ["family", "params", "rng_seed", "n", "m", "k", "decision", "seed", "states", "expanded",
          "jumps", "recursion_calls", "seconds"]


def bench_row(spec: GeneratorSpec, k: int, config: SolverConfig | None = None) -> dict:
    g = generate(spec)
    solver = XPSolver(g, config or SolverConfig())
    t0 = time.perf_counter()
    states = expanded = jumps = calls = 0
    hit = None
    for s in range(g.n):
        res = solver.run(SolveRequest(g, 1 << s, k))
        states += res.stats.states
        expanded += res.stats.expanded
        jumps += res.stats.jumps
        calls += res.stats.recursion_calls
        if res.decision:
            hit = s
            break
    return {
        "family": spec.family,
        "params": ";".join(f"{a}={b}" for a, b in sorted(spec.params.items())),
        "rng_seed": spec.rng_seed,
        "n": g.n,
        "m": g.m,
        "k": k,
        "decision": hit is not None,
        "seed": hit,
        "states": states,
        "expanded": expanded,
        "jumps": jumps,
        "recursion_calls": calls,
        "seconds": round(time.perf_counter() - t0, 4),
    }


def run_bench(specs: list[GeneratorSpec], ks: list[int], out, config: SolverConfig | None = None) -> list[dict]:
    rows = [bench_row(spec, k, config) for spec in specs for k in ks]
    writer = csv.DictWriter(out, fieldnames=FIELDS)
    writer.writeheader()
    writer.writerows(rows)
    return rows
