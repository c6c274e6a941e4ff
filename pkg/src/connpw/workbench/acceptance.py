"""Drivers for the nine acceptance criteria.

Each ``criterion_*`` function returns a :class:`CriterionResult`; nothing here
asserts, so the pytest module and ``scripts/run_acceptance.py`` share one
implementation and print the same PASS/FAIL lines.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Iterator

from ..decomposition import (
    PathDecomposition,
    classify_branches,
    is_connected_decomposition,
    verify,
)
from ..graph_core import Graph
from ..oracle import oracle_cpw, oracle_cpw_with_seed, oracle_decide, oracle_decomposition, oracle_pathwidth
from ..structurer import discover_bottlenecks, structure_all, structure_report
from ..xp_solver import (
    IntegrityError,
    SolveRequest,
    SolverConfig,
    XPSolver,
    check_witness,
    potential_state_bound,
    solve_cpw,
)
from .generators import GeneratorSpec, generate
from .suite import candidate_sets, transform_outcome


@dataclass
class AcceptanceConfig:
    exhaustive_max_n: int = 6
    random_n7: int = 5000
    rng_seed: int = 20240601
    state_check_max_k: int = 3
    min_triples: int = 1000
    transform_max_n: int = 10
    scale_n: int = 20
    scale_k: int = 3
    scale_budget_s: float = 600.0
    scale_trees: int = 10


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    metrics: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} [{self.number}] {self.name}: {self.detail}"


# -- corpora ----------------------------------------------------------------

def exhaustive_connected(n: int) -> Iterator[Graph]:
    """Every connected labelled graph on ``n`` vertices (edge-subset sweep)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        if g.is_connected():
            yield g


def random_connected(n: int, count: int, rng: random.Random) -> Iterator[Graph]:
    """Uniform over labelled connected graphs: uniform edge subsets, rejecting disconnected ones."""
    pairs = list(itertools.combinations(range(n), 2))
    made = 0
    while made < count:
        g = Graph.from_edges(n, [e for e in pairs if rng.random() < 0.5])
        if g.is_connected():
            made += 1
            yield g


def sweep_corpus(cfg: AcceptanceConfig) -> Iterator[Graph]:
    for n in range(1, cfg.exhaustive_max_n + 1):
        yield from exhaustive_connected(n)
    yield from random_connected(7, cfg.random_n7, random.Random(cfg.rng_seed))


def _bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def shaped_graphs(max_n: int) -> list[Graph]:
    """Hand-picked shapes rich in bottlenecks: stars, spiders, brooms, K_{2,m}."""
    specs = [GeneratorSpec("star", {"leaves": m}) for m in range(5, max_n)]
    specs += [GeneratorSpec("spider", {"legs": legs, "len": 1}) for legs in range(5, max_n)]
    specs += [GeneratorSpec("spider", {"legs": legs, "len": 2}) for legs in range(2, (max_n - 1) // 2 + 1)]
    specs += [GeneratorSpec("caterpillar", {"spine": s, "legs_per": l})
              for s in range(1, max_n + 1) for l in range(1, max_n) if s * (l + 1) <= max_n]
    out = [generate(s) for s in specs]
    out += [_bipartite(2, m) for m in range(3, max_n - 1)]
    out += [_bipartite(3, m) for m in range(3, max_n - 2)]
    return out


def transform_corpus(cfg: AcceptanceConfig) -> list[Graph]:
    graphs = shaped_graphs(cfg.transform_max_n)
    for n in range(3, cfg.transform_max_n + 1):
        for s in range(6):
            graphs.append(generate(GeneratorSpec("random_tree", {"n": n}, s)))
            graphs.append(generate(GeneratorSpec("random_connected", {"n": n, "p_percent": 30}, s)))
            graphs.append(generate(GeneratorSpec("random_connected", {"n": n, "p_percent": 55}, s)))
    return graphs


def closure_extra() -> list[Graph]:
    """Larger caterpillars with two to four bottlenecks, used only for the closure check."""
    return [generate(GeneratorSpec("caterpillar", {"spine": sp, "legs_per": l}))
            for sp, l in ((2, 5), (2, 6), (3, 4), (3, 5), (4, 4))]


def oracle_decompositions(g: Graph) -> list[tuple[PathDecomposition, int]]:
    """(decomposition, seed) pairs: every optimal seed at budget cpw+1, one seed at cpw+2."""
    cpw = oracle_cpw(g, cap=None)
    out = []
    for s in range(g.n):
        if oracle_decide(g, 1 << s, cpw + 1, cap=None):
            out.append((oracle_decomposition(g, 1 << s, cpw + 1, cap=None), s))
    if cpw + 2 <= g.n:
        out.append((oracle_decomposition(g, 1, cpw + 2, cap=None), 0))
    return out


# -- criteria 1, 3, 8: one pass over the sweep corpus ------------------------

@dataclass
class SweepStats:
    graphs: int = 0
    decisions: int = 0
    mismatches: list = field(default_factory=list)
    positives: int = 0
    witness_failures: list = field(default_factory=list)
    state_runs: int = 0
    state_violations: list = field(default_factory=list)
    max_state_fraction: float = 0.0
    pw_failures: list = field(default_factory=list)
    max_ratio: float = 0.0
    seconds: float = 0.0


def run_sweep(cfg: AcceptanceConfig, graphs=None) -> SweepStats:
    st = SweepStats()
    t0 = time.perf_counter()
    # fast paths off so every decision goes through the DP
    config = SolverConfig(fast_paths=False)
    for g in graphs if graphs is not None else sweep_corpus(cfg):
        st.graphs += 1
        truth_cpw = oracle_cpw(g, cap=None)
        solver = XPSolver(g, config)
        solver_cpw = None
        for k in range(1, g.n + 1):
            found = None
            check_states = g.n <= cfg.exhaustive_max_n and k <= cfg.state_check_max_k
            bound = potential_state_bound(g.n, k)
            for s in range(g.n):
                req = SolveRequest(g, 1 << s, k)
                res = solver.run(req)
                if check_states:
                    st.state_runs += 1
                    st.max_state_fraction = max(st.max_state_fraction, res.stats.states / bound)
                    if res.stats.states > bound:
                        st.state_violations.append((g.edges, k, s, res.stats.states))
                if res.decision:
                    st.positives += 1
                    try:
                        check_witness(g, req, res.witness)
                    except IntegrityError as exc:
                        st.witness_failures.append((g.edges, k, s, str(exc)))
                    if found is None:
                        found = s
                    if not check_states:
                        break
            st.decisions += 1
            if (found is not None) != (k > truth_cpw):
                st.mismatches.append((g.n, g.edges, k))
            if found is not None and solver_cpw is None:
                solver_cpw = k - 1
        pw = oracle_pathwidth(g, cap=None)
        if solver_cpw is None or solver_cpw < pw:
            st.pw_failures.append((g.edges, solver_cpw, pw))
        elif pw:
            st.max_ratio = max(st.max_ratio, solver_cpw / pw)
    st.seconds = time.perf_counter() - t0
    return st


def criterion_oracle_equivalence(st: SweepStats) -> CriterionResult:
    ok = not st.mismatches and st.graphs > 0
    detail = f"{st.graphs} graphs, {st.decisions} (graph,k) decisions, {len(st.mismatches)} mismatches, {st.seconds:.0f}s"
    return CriterionResult(1, "solver decision equals oracle for every k", ok, detail,
                           {"mismatches": st.mismatches[:10]})


def criterion_witness(st: SweepStats, extra: list[tuple[Graph, str]] | None = None) -> CriterionResult:
    fails = list(st.witness_failures)
    count = st.positives
    for g, label in extra or []:
        solver = XPSolver(g, SolverConfig(fast_paths=False))
        for k in range(1, g.n + 1):
            for s in range(g.n):
                req = SolveRequest(g, 1 << s, k)
                res = solver.run(req)
                if res.decision:
                    count += 1
                    try:
                        check_witness(g, req, res.witness)
                    except IntegrityError as exc:
                        fails.append((label, k, s, str(exc)))
    ok = count > 0 and not fails
    return CriterionResult(3, "positive decisions rebuild sound witnesses", ok,
                           f"{count} witnesses checked, {len(fails)} failures", {"failures": fails[:10]})


def criterion_state_bound(st: SweepStats) -> CriterionResult:
    ok = st.state_runs > 0 and not st.state_violations
    return CriterionResult(
        8, "state counts within the potential-state bound", ok,
        f"{st.state_runs} runs (n<=6, k<=3), {len(st.state_violations)} over bound, "
        f"max count/bound = {st.max_state_fraction:.3g}",
    )


def criterion_pw(st: SweepStats, extra: list[Graph] | None = None) -> CriterionResult:
    fails = list(st.pw_failures)
    worst = st.max_ratio
    total = st.graphs
    ratios = []
    for g in extra or []:
        total += 1
        cpw = solve_cpw(g, SolverConfig(fast_paths=False)).cpw
        pw = oracle_pathwidth(g, cap=None)
        if cpw < pw:
            fails.append((g.edges, cpw, pw))
        elif pw:
            ratios.append(cpw / pw)
            worst = max(worst, cpw / pw)
    ok = not fails and total > 0
    return CriterionResult(7, "cpw >= pw on every corpus graph", ok,
                           f"{total} graphs, {len(fails)} violations, max cpw/pw = {worst:.3f}",
                           {"max_ratio": worst, "failures": fails[:10]})


# -- criterion 2 --------------------------------------------------------------

def known_value_cases() -> list[tuple[str, Graph, int]]:
    cases = [("single vertex", Graph.from_edges(1, []), 0)]
    for n in range(2, 9):
        cases.append((f"K_{n}", generate(GeneratorSpec("complete", {"n": n})), n - 1))
    for n in range(4, 11):
        cases.append((f"C_{n}", generate(GeneratorSpec("cycle", {"n": n})), 2))
    for spine in range(1, 6):
        for legs in range(0, 4):
            g = generate(GeneratorSpec("caterpillar", {"spine": spine, "legs_per": legs}))
            if g.n >= 2:
                cases.append((f"caterpillar({spine},{legs})", g, 1))
    for n in range(2, 11):
        g = generate(GeneratorSpec("path", {"n": n}))
        cases.append((f"P_{n}", g, 1))
    return cases


def criterion_known_values() -> CriterionResult:
    fails = []
    for label, g, expected in known_value_cases():
        got = {
            "solver": solve_cpw(g).cpw,
            "solver_dp": solve_cpw(g, SolverConfig(fast_paths=False)).cpw,
            "oracle": oracle_cpw(g, cap=None),
        }
        if any(v != expected for v in got.values()):
            fails.append((label, expected, got))
    n = len(known_value_cases())
    return CriterionResult(2, "known exact values", not fails, f"{n} graphs, {len(fails)} wrong",
                           {"failures": fails})


# -- criteria 4, 5, 6 ---------------------------------------------------------

@dataclass
class StructureStats:
    graphs: int = 0
    decompositions: int = 0
    triples: int = 0
    bottleneck_triples: int = 0
    transform_failures: list = field(default_factory=list)
    pairs: int = 0
    bound_failures: list = field(default_factory=list)
    max_not_in_slack: int = -10**9
    closure_runs: int = 0
    with_bottleneck: int = 0
    with_two: int = 0
    closure_failures: list = field(default_factory=list)
    seconds: float = 0.0


def _closure(st: StructureStats, g: Graph, p: PathDecomposition, seed: int, bns: list) -> None:
    k = p.width + 1
    st.closure_runs += 1
    st.with_bottleneck += bool(bns)
    st.with_two += len(bns) >= 2
    out = structure_all(g, p, k, 1 << seed, bns)
    rep = structure_report(g, out, k, bns)
    good = (rep["structured"] and rep["nested"] and verify(g, out).ok
            and is_connected_decomposition(g, out) and out.width <= p.width)
    if not good:
        st.closure_failures.append((g.edges, p.to_lists(), bns))


def run_structure_battery(cfg: AcceptanceConfig, graphs: list[Graph] | None = None,
                          closure_graphs: list[Graph] | None = None) -> StructureStats:
    st = StructureStats()
    t0 = time.perf_counter()
    graphs = transform_corpus(cfg) if graphs is None else graphs
    closure_graphs = closure_extra() if closure_graphs is None else closure_graphs
    for g in graphs:
        st.graphs += 1
        for p, seed in oracle_decompositions(g):
            st.decompositions += 1
            k = p.width + 1
            bns = discover_bottlenecks(g, p, k)
            for s in candidate_sets(g, p, k):
                st.triples += 1
                st.bottleneck_triples += s in bns
                out = transform_outcome(g, p, s, k, 1 << seed)
                if not out.ok:
                    st.transform_failures.append((g.edges, p.to_lists(), s, out))
            for s in range(1, 1 << g.n):
                rep = classify_branches(g, p, s, k)
                st.pairs += 1
                st.max_not_in_slack = max(st.max_not_in_slack, rep.not_in_count - 2 * k)
                if not rep.within_bound:
                    st.bound_failures.append((g.edges, p.to_lists(), s))
            _closure(st, g, p, seed, bns)
    for g in closure_graphs:
        for p, seed in oracle_decompositions(g):
            _closure(st, g, p, seed, discover_bottlenecks(g, p, p.width + 1))
    st.seconds = time.perf_counter() - t0
    return st


def criterion_transform(st: StructureStats, cfg: AcceptanceConfig) -> CriterionResult:
    ok = st.triples >= cfg.min_triples and not st.transform_failures
    return CriterionResult(
        4, "structuring transform battery", ok,
        f"{st.triples} triples ({st.bottleneck_triples} with a bottleneck) over {st.decompositions} "
        f"decompositions of {st.graphs} graphs, {len(st.transform_failures)} failures, {st.seconds:.0f}s",
    )


def criterion_branch_bound(st: StructureStats) -> CriterionResult:
    ok = st.pairs > 0 and not st.bound_failures
    return CriterionResult(
        5, "at most 2k non-in branches", ok,
        f"{st.pairs} (decomposition, S) pairs, {len(st.bound_failures)} violations, "
        f"max (non-in - 2k) = {st.max_not_in_slack}",
    )


def criterion_closure(st: StructureStats) -> CriterionResult:
    ok = st.with_two > 0 and not st.closure_failures
    return CriterionResult(
        6, "iterated transform structures every bottleneck", ok,
        f"{st.closure_runs} runs ({st.with_bottleneck} with >=1 bottleneck, {st.with_two} with >=2), "
        f"{len(st.closure_failures)} failures",
    )


# -- criterion 9 --------------------------------------------------------------

def scale_instances(cfg: AcceptanceConfig) -> list[tuple[str, Graph]]:
    n = cfg.scale_n
    out = []
    for s in range(cfg.scale_trees):  # mixes positive and negative instances
        spec = GeneratorSpec("random_tree", {"n": n}, s)
        out.append((spec.label(), generate(spec)))
    for spec in (GeneratorSpec("caterpillar", {"spine": 5, "legs_per": 3}),
                 GeneratorSpec("caterpillar", {"spine": 4, "legs_per": 4}),
                 GeneratorSpec("caterpillar", {"spine": 10, "legs_per": 1})):
        out.append((spec.label(), generate(spec)))
    # caterpillar-like: a spine whose legs have length two (a lobster)
    spine = 4
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt, leg = spine, 0
    while nxt + 1 < n:
        edges += [(leg % spine, nxt), (nxt, nxt + 1)]
        nxt, leg = nxt + 2, leg + 1
    if nxt < n:
        edges.append((leg % spine, nxt))
    out.append((f"lobster(spine={spine},n={n})", Graph.from_edges(n, edges)))
    return out


def criterion_scale(cfg: AcceptanceConfig) -> CriterionResult:
    rows, slow = [], []
    for label, g in scale_instances(cfg):
        solver = XPSolver(g)
        t0 = time.perf_counter()
        hit = None
        for s in range(g.n):
            res = solver.run(SolveRequest(g, 1 << s, cfg.scale_k))
            if res.decision:
                hit = s
                check_witness(g, SolveRequest(g, 1 << s, cfg.scale_k), res.witness)
                break
        dt = time.perf_counter() - t0
        rows.append({"graph": label, "n": g.n, "decision": hit is not None, "seconds": round(dt, 3)})
        if dt > cfg.scale_budget_s:
            slow.append(label)
    worst = max(r["seconds"] for r in rows)
    return CriterionResult(9, f"k={cfg.scale_k} decide at n={cfg.scale_n}", not slow,
                           f"{len(rows)} graphs, slowest {worst:.2f}s (budget {cfg.scale_budget_s:.0f}s)",
                           {"rows": rows})
