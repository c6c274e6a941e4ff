"""Compare solver and oracle on graphs where the per-set selection bound actually prunes.

Hubs carrying many pendant vertices give bottlenecks with far more than 4k+2
branches, which never happens on the n <= 7 acceptance sweep. The script
reports how often the bound rejected a candidate state and any disagreement
with the oracle.
"""
import argparse
import random
import time
from dataclasses import dataclass

from connpw.graph_core import Graph
from connpw.oracle import oracle_cpw
from connpw.xp_solver import SolverConfig, XPSolver, decide_any_seed


@dataclass
class StressConfig:
    seconds: float = 120.0
    min_n: int = 10
    max_n: int = 14
    max_hubs: int = 3
    pendant_share: float = 0.8
    max_extra_edges: int = 4
    rng_seed: int = 0


def bushy_graph(rng: random.Random, cfg: StressConfig) -> Graph:
    n = rng.randint(cfg.min_n, cfg.max_n)
    hubs = rng.randint(1, cfg.max_hubs)
    edges = {(rng.randrange(h), h) for h in range(1, hubs)}
    for v in range(hubs, n):
        edges.add((rng.randrange(hubs), v) if rng.random() < cfg.pendant_share else (rng.randrange(v), v))
    for _ in range(rng.randint(0, cfg.max_extra_edges)):
        u, v = sorted(rng.sample(range(n), 2))
        edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


class CountingSolver(XPSolver):
    checks = 0
    rejections = 0

    def _bound_ok(self, idx, bag, cover):
        ok = super()._bound_ok(idx, bag, cover)
        CountingSolver.checks += 1
        CountingSolver.rejections += not ok
        return ok


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seconds", type=float, default=StressConfig.seconds)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    cfg = StressConfig(seconds=args.seconds, rng_seed=args.seed)
    rng = random.Random(cfg.rng_seed)
    graphs = mismatches = 0
    t0 = time.perf_counter()
    while time.perf_counter() - t0 < cfg.seconds:
        g = bushy_graph(rng, cfg)
        truth = oracle_cpw(g, cap=None)
        solver = CountingSolver(g, SolverConfig(fast_paths=False))
        at = decide_any_seed(solver, truth + 1)[0] is not None
        below = truth >= 1 and decide_any_seed(solver, truth)[0] is not None
        graphs += 1
        if not at or below:
            mismatches += 1
            print("MISMATCH", g.n, g.edges, truth, at, below, flush=True)
    print(f"graphs={graphs} mismatches={mismatches} bound_checks={CountingSolver.checks} "
          f"bound_rejections={CountingSolver.rejections}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
