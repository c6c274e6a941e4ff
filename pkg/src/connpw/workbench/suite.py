"""Cross-validation harness: solver vs oracle plus the structural batteries."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..decomposition import (
    PathDecomposition,
    classify_branches,
    is_I_connected,
    is_connected_decomposition,
    is_structured,
    verify,
)
from ..graph_core import Graph, VertexSet, mask_of, to_list
from ..oracle import oracle_cpw_with_seed, oracle_decide, oracle_decomposition, oracle_pathwidth
from ..structurer import discover_bottlenecks, plan, structure_all, structure_report, apply_plan
from ..xp_solver import IntegrityError, SolveRequest, SolverConfig, XPSolver, check_witness
from .generators import GeneratorSpec, generate


@dataclass
class TransformOutcome:
    valid: bool
    seed_connected: bool
    width_ok: bool
    structured: bool
    length_ok: bool
    first_bag_kept: bool

    @property
    def ok(self) -> bool:
        return all(self.__dict__.values())


def transform_outcome(g: Graph, p: PathDecomposition, s: VertexSet, k: int, seeds: VertexSet) -> TransformOutcome:
    rep = classify_branches(g, p, s, k)
    pl = plan(g, p, s, k, rep)
    out = apply_plan(p, pl)
    return TransformOutcome(
        valid=verify(g, out).ok,
        seed_connected=is_I_connected(g, out, seeds),
        width_ok=out.width <= p.width,
        structured=is_structured(g, out, s, k),
        length_ok=len(out) == len(p) + pl.d + 1,
        first_bag_kept=out.bags[0] == p.bags[0],
    )


def candidate_sets(g: Graph, p: PathDecomposition, k: int, max_size: int = 2) -> list[VertexSet]:
    """Bottlenecks first, then small sets that have at least one in-branch."""
    chosen = discover_bottlenecks(g, p, k)
    seen = set(chosen)
    for r in range(1, min(max_size, g.n) + 1):
        for combo in itertools.combinations(range(g.n), r):
            s = mask_of(combo)
            if s in seen or s == g.vertices:
                continue
            if classify_branches(g, p, s, k).has_in_branch:
                chosen.append(s)
                seen.add(s)
    return chosen


def _agreement(g: Graph, config: SolverConfig) -> dict:
    solver = XPSolver(g, config)
    rows, ok, witnesses_ok = [], True, True
    for k in range(1, g.n + 1):
        found = None
        for s in range(g.n):
            res = solver.run(SolveRequest(g, 1 << s, k))
            if res.decision:
                found = (s, res)
                break
        mine = found is not None
        truth = any(oracle_decide(g, 1 << s, k, cap=None) for s in range(g.n))
        wit_ok = None
        if found:
            try:
                check_witness(g, SolveRequest(g, 1 << found[0], k), found[1].witness)
                wit_ok = True
            except IntegrityError:
                wit_ok = False
                witnesses_ok = False
        ok &= mine == truth
        rows.append({"k": k, "solver": mine, "oracle": truth, "witness_ok": wit_ok})
    return {"agreement": {"ok": ok, "per_k": rows}, "witness": {"ok": witnesses_ok}}


def check_graph(g: Graph, config: SolverConfig | None = None) -> dict:
    """Run every check on one graph; failures are recorded, never raised."""
    config = config or SolverConfig(fast_paths=False)
    checks: dict = {}
    timings: dict = {}

    def record(name: str, fn: Callable[[], dict]):
        t0 = time.perf_counter()
        try:
            checks.update(fn())
        except Exception as exc:  # a broken check must not stop the suite
            checks[name] = {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
        timings[name] = round(time.perf_counter() - t0, 6)

    record("agreement", lambda: _agreement(g, config))

    cpw, seed = oracle_cpw_with_seed(g, cap=None)
    budget = cpw + 1
    p = oracle_decomposition(g, 1 << seed, budget, cap=None)

    def battery():
        sets = candidate_sets(g, p, budget)
        fails = [to_list(s) for s in sets if not transform_outcome(g, p, s, budget, 1 << seed).ok]
        return {"transform": {"ok": not fails, "sets": len(sets), "failed_sets": fails}}

    def non_in_bound():
        worst = 0
        for r in range(1, min(budget, g.n) + 1):
            for combo in itertools.combinations(range(g.n), r):
                rep = classify_branches(g, p, mask_of(combo), budget)
                worst = max(worst, rep.not_in_count)
        return {"non_in_bound": {"ok": worst <= 2 * budget, "max_not_in": worst, "bound": 2 * budget}}

    def closure():
        bns = discover_bottlenecks(g, p, budget)
        out = structure_all(g, p, budget, 1 << seed, bns)
        rep = structure_report(g, out, budget, bns)
        ok = (rep["structured"] and rep["nested"] and verify(g, out).ok
              and is_connected_decomposition(g, out) and out.width <= p.width)
        return {"structure_all": {"ok": ok, "bottlenecks": len(bns)}}

    def widths():
        pw = oracle_pathwidth(g, cap=25)
        solver_cpw = next(r["k"] for r in checks["agreement"]["per_k"] if r["solver"]) - 1
        ratio = None if pw == 0 else round(solver_cpw / pw, 6)
        return {"cpw_ge_pw": {"ok": solver_cpw >= pw, "cpw": solver_cpw, "pw": pw, "ratio": ratio}}

    record("transform", battery)
    record("non_in_bound", non_in_bound)
    record("structure_all", closure)
    record("cpw_ge_pw", widths)
    return {"checks": checks, "timings": timings}


@dataclass
class SuiteReport:
    graphs: list = field(default_factory=list)
    timings: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        out: dict = {}
        for entry in self.graphs:
            for name, res in entry["checks"].items():
                slot = out.setdefault(name, {"passed": 0, "failed": 0})
                slot["passed" if res.get("ok") else "failed"] += 1
        return out

    @property
    def ok(self) -> bool:
        return all(v["failed"] == 0 for v in self.summary.values())

    def to_dict(self, with_timings: bool = True) -> dict:
        d = {"summary": self.summary, "ok": self.ok, "graphs": self.graphs}
        if with_timings:
            d["timings"] = self.timings
        return d


def run_suite(corpus: list[GeneratorSpec], max_n: int, config: SolverConfig | None = None,
              progress: Optional[Callable[[str], None]] = None) -> SuiteReport:
    report = SuiteReport()
    for spec in corpus:
        g = generate(spec)
        if g.n > max_n:
            raise ValueError(f"{spec.label()} has {g.n} vertices, above max_n={max_n}")
        res = check_graph(g, config)
        report.graphs.append({"spec": spec.to_dict(), "n": g.n, "m": g.m, "checks": res["checks"]})
        report.timings.append({"spec": spec.label(), "seconds": res["timings"]})
        if progress:
            progress(spec.label())
    return report
