"""Dynamic program over (bag, cover) states for seed-connected path
decompositions with bags of at most ``k`` vertices.

A state is a pair ``(X, C)``: ``X`` is the last bag of a partial decomposition
and ``C`` the set of vertices it has covered so far. Two transitions exist:

* step: append one bag ``Y`` made of vertices kept from ``X`` (all border
  vertices of ``C`` included) plus fresh vertices hanging off them;
* jump: for a bottleneck ``S`` inside ``X`` (at least ``2k+1`` S-branches),
  swallow a batch of untouched S-branches at once, each one certified by a
  recursive call with budget ``k - |X|`` seeded at the neighbours of ``S``.

States are only kept when, for every bottleneck ``S`` inside the bag, either
at most ``2k`` S-branches are covered or at most ``2k`` are not. This keeps
the number of states polynomial in ``n`` for fixed ``k``.
"""
from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass, field
from typing import Optional

from .decomposition import PathDecomposition, is_I_connected, verify
from .graph_core import (
    BottleneckIndex,
    DisconnectedGraph,
    Graph,
    GraphError,
    VertexSet,
    lowest,
    members,
    popcount,
    reach,
    to_list,
)


class StateCapExceeded(RuntimeError):
    """A run generated more states than ``SolverConfig.max_states``."""


class IntegrityError(AssertionError):
    """A rebuilt witness failed verification; indicates a solver bug."""


@dataclass(frozen=True)
class SolveRequest:
    graph: Graph
    seeds: VertexSet
    bag_budget: int
    # restrict the instance to G[universe]; None means the whole graph
    universe: Optional[VertexSet] = None

    @property
    def vertex_set(self) -> VertexSet:
        return self.graph.vertices if self.universe is None else self.universe

    def validate(self) -> None:
        univ = self.vertex_set
        if self.bag_budget < 1:
            raise GraphError("bag budget must be at least 1")
        if not self.seeds:
            raise GraphError("seed set must be non-empty")
        if self.seeds & ~univ:
            raise GraphError("seeds must lie inside the graph")
        if univ == 0 or reach(self.graph, univ & -univ, univ) != univ:
            raise DisconnectedGraph("the solver needs a connected graph")


@dataclass(frozen=True)
class SolverState:
    bag: VertexSet
    cover: VertexSet


@dataclass
class SolverConfig:
    max_states: Optional[int] = None
    # test hook: shifts the recursive budget of jumps; 0 is the correct rule
    jump_budget_offset: int = 0
    use_jumps: bool = True
    fast_paths: bool = True


class Kind(enum.Enum):
    INIT = "init"
    STEP = "step"
    JUMP = "jump"


@dataclass
class Witness:
    kind: Kind
    state: SolverState
    predecessor: Optional["Witness"] = None
    step_bag: VertexSet = 0
    jump_base: VertexSet = 0
    jump_branches: tuple[tuple[VertexSet, PathDecomposition], ...] = ()


@dataclass
class Stats:
    states: int = 0
    expanded: int = 0
    steps: int = 0
    jumps: int = 0
    recursion_calls: int = 0
    memo_hits: int = 0

    def add(self, other: "Stats") -> None:
        for f in self.__dataclass_fields__:
            setattr(self, f, getattr(self, f) + getattr(other, f))

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class DPResult:
    decision: bool
    witness: Optional[Witness]
    stats: Stats = field(default_factory=Stats)

    def decomposition(self) -> Optional[PathDecomposition]:
        return rebuild(self.witness) if self.witness is not None else None


def potential_state_bound(n: int, k: int) -> int:
    """The literal count n^k * 2^k * n^(2k) * 2^(2k+1) of potential states."""
    return n**k * 2**k * n ** (2 * k) * 2 ** (2 * k + 1)


def _border(adj, cover: VertexSet, universe: VertexSet) -> VertexSet:
    outside = universe & ~cover
    b = 0
    for v in members(cover):
        if adj[v] & outside:
            b |= 1 << v
    return b


def _all_submasks(mask: VertexSet):
    """Every subset of ``mask`` including the empty one."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class XPSolver:
    """Owns the recursion memo shared by every run on one graph."""

    def __init__(self, graph: Graph, config: SolverConfig | None = None):
        self.g = graph
        self.config = config or SolverConfig()
        self._memo: dict[tuple[int, int, int], Optional[PathDecomposition]] = {}
        self._indices: dict[tuple[int, int], BottleneckIndex] = {}
        self._live_states = 0

    # -- public API -------------------------------------------------------

    def run(self, req: SolveRequest) -> DPResult:
        req.validate()
        if req.graph is not self.g and req.graph != self.g:
            raise GraphError("request graph differs from the solver graph")
        stats = Stats()
        self._live_states = 0
        wit = self._run(req.vertex_set, req.seeds, req.bag_budget, stats)
        return DPResult(wit is not None, wit, stats)

    def decide(self, req: SolveRequest) -> tuple[bool, Optional[Witness]]:
        res = self.run(req)
        return res.decision, res.witness

    def initial_states(self, req: SolveRequest) -> list[SolverState]:
        req.validate()
        return [SolverState(1 << v, 1 << v) for v in members(req.seeds)]

    def step_successors(self, req: SolveRequest, w: SolverState) -> list[SolverState]:
        idx = self._index(req.vertex_set, req.bag_budget)
        return [
            SolverState(y, c)
            for y, c in self._steps(req.vertex_set, req.seeds, req.bag_budget, w.bag, w.cover)
            if self._bound_ok(idx, y, c)
        ]

    def jump_successors(self, req: SolveRequest, w: SolverState) -> list[SolverState]:
        idx = self._index(req.vertex_set, req.bag_budget)
        stats = Stats()
        return [
            SolverState(w.bag, c)
            for c, _s, _d in self._jumps(req.vertex_set, req.bag_budget, w.bag, w.cover, idx, stats)
            if self._bound_ok(idx, w.bag, c)
        ]

    def is_state(self, req: SolveRequest, st: SolverState) -> bool:
        return not state_violations(self.g, req, st, self._index(req.vertex_set, req.bag_budget))

    def sub_decomposition(self, universe: VertexSet, seeds: VertexSet, budget: int,
                          stats: Stats | None = None) -> Optional[PathDecomposition]:
        """A ``seeds``-connected decomposition of G[universe] with bags <= budget, or None."""
        stats = stats if stats is not None else Stats()
        key = (universe, seeds, budget)
        if key in self._memo:
            stats.memo_hits += 1
            return self._memo[key]
        stats.recursion_calls += 1
        size = popcount(universe)
        if budget < 1:
            dec = None
        elif size <= budget:
            first = 1 << lowest(seeds)
            dec = PathDecomposition((first, universe) if first != universe else (universe,))
        elif budget == 1:
            dec = None  # connected and more than one vertex: some edge needs a bag of two
        else:
            wit = self._run(universe, seeds, budget, stats)
            dec = rebuild(wit) if wit is not None else None
        self._memo[key] = dec
        return dec

    # -- internals --------------------------------------------------------

    def _index(self, universe: VertexSet, k: int) -> BottleneckIndex:
        key = (universe, k)
        idx = self._indices.get(key)
        if idx is None:
            idx = BottleneckIndex(self.g, k, universe)
            self._indices[key] = idx
        return idx

    def _bound_ok(self, idx: BottleneckIndex, bag: VertexSet, cover: VertexSet) -> bool:
        limit = 2 * idx.k
        for s in idx.bottlenecks_in(bag):
            brs = idx.family(s).branches
            inside = sum(1 for h in brs if h & ~cover == 0)
            if inside > limit and len(brs) - inside > limit:
                return False
        return True

    def _run(self, universe: VertexSet, seeds: VertexSet, k: int, stats: Stats) -> Optional[Witness]:
        idx = self._index(universe, k)
        table: dict[tuple[int, int], Witness] = {}
        heap: list[tuple[int, int, int, int]] = []
        cap = self.config.max_states
        use_jumps = self.config.use_jumps

        def discover(bag, cover, wit):
            table[(bag, cover)] = wit
            stats.states += 1
            self._live_states += 1
            if cap is not None and self._live_states > cap:
                raise StateCapExceeded(f"more than {cap} states generated")
            heapq.heappush(heap, (popcount(cover), -popcount(bag), bag, cover))

        for v in members(seeds):
            st = SolverState(1 << v, 1 << v)
            wit = Witness(Kind.INIT, st)
            if st.cover == universe:
                stats.states += 1
                return wit
            discover(st.bag, st.cover, wit)

        while heap:
            _, _, bag, cover = heapq.heappop(heap)
            w = table[(bag, cover)]
            stats.expanded += 1
            for y, c in self._steps(universe, seeds, k, bag, cover):
                if (y, c) in table or not self._bound_ok(idx, y, c):
                    continue
                stats.steps += 1
                wit = Witness(Kind.STEP, SolverState(y, c), w, step_bag=y)
                if c == universe:
                    stats.states += 1
                    return wit
                discover(y, c, wit)
            if not use_jumps:
                continue
            for c, s, chosen in self._jumps(universe, k, bag, cover, idx, stats):
                if (bag, c) in table or not self._bound_ok(idx, bag, c):
                    continue
                stats.jumps += 1
                wit = Witness(Kind.JUMP, SolverState(bag, c), w, jump_base=s, jump_branches=chosen)
                if c == universe:
                    stats.states += 1
                    return wit
                discover(bag, c, wit)
        return None

    def _steps(self, universe: VertexSet, seeds: VertexSet, k: int, bag: VertexSet, cover: VertexSet):
        adj = self.g.adj
        outside = universe & ~cover
        must = _border(adj, cover, universe)
        for extra in _all_submasks(bag & ~must):
            keep = must | extra
            room = k - popcount(keep)
            if room < 0:
                continue
            for new in self._grow(keep, outside, seeds, room):
                y = keep | new
                if not y or (not new and keep == bag):
                    continue
                yield y, cover | new

    def _grow(self, keep: VertexSet, outside: VertexSet, seeds: VertexSet, room: int) -> list[VertexSet]:
        """Sets N of fresh vertices, |N| <= room, where every component of
        G[keep | N] touches ``keep`` or a seed."""
        adj = self.g.adj
        base = 0
        for v in members(keep):
            base |= adj[v]
        out = [0]
        level = {0: base}
        for _ in range(room):
            nxt: dict[int, int] = {}
            for grown, reach_mask in level.items():
                cand = (reach_mask | seeds) & outside & ~grown
                for v in members(cand):
                    bigger = grown | 1 << v
                    if bigger not in nxt:
                        nxt[bigger] = reach_mask | adj[v]
            if not nxt:
                break
            out.extend(nxt)
            level = nxt
        return out

    def _jumps(self, universe: VertexSet, k: int, bag: VertexSet, cover: VertexSet,
               idx: BottleneckIndex, stats: Stats):
        budget = k - popcount(bag) + self.config.jump_budget_offset
        if budget < 1:
            return
        adj = self.g.adj
        limit = 2 * k
        for s in idx.bottlenecks_in(bag):
            brs = idx.family(s).branches
            need = max(1, len(brs) - limit)
            untouched = [h for h in brs if h & cover == 0]
            if len(untouched) < need:
                continue
            touching = 0
            for v in members(s):
                touching |= adj[v]
            good = []
            for h in untouched:
                dec = self.sub_decomposition(h, touching & h, budget, stats)
                if dec is not None:
                    good.append((h, dec))
            for size in range(need, len(good) + 1):
                for chosen in itertools.combinations(good, size):
                    grown = cover
                    for h, _ in chosen:
                        grown |= h
                    yield grown, s, chosen


def state_violations(g: Graph, req: SolveRequest, st: SolverState,
                     idx: BottleneckIndex | None = None) -> list[str]:
    """Names of the state invariants that ``st`` breaks (empty list: valid)."""
    univ = req.vertex_set
    k = req.bag_budget
    bad = []
    if not st.bag or popcount(st.bag) > k:
        bad.append("bag size")
    if st.bag & ~st.cover:
        bad.append("bag within cover")
    if st.cover & ~univ:
        bad.append("cover within graph")
    if _border(g.adj, st.cover, univ) & ~st.bag:
        bad.append("border within bag")
    if reach(g, req.seeds & st.cover, st.cover) != st.cover:
        bad.append("seed in every component")
    idx = idx or BottleneckIndex(g, k, univ)
    for s in idx.bottlenecks_in(st.bag):
        brs = idx.family(s).branches
        inside = sum(1 for h in brs if h & ~st.cover == 0)
        if min(inside, len(brs) - inside) > 2 * k:
            bad.append(f"selection bound for {to_list(s)}")
    return bad


def witness_chain(witness: Witness) -> list[Witness]:
    chain = []
    node: Optional[Witness] = witness
    while node is not None:
        chain.append(node)
        node = node.predecessor
    chain.reverse()
    if chain[0].kind is not Kind.INIT:
        raise IntegrityError("witness chain does not start at an initial state")
    return chain


def rebuild(witness: Witness) -> PathDecomposition:
    """Replay a witness into the decomposition it certifies."""
    bags: list[VertexSet] = []
    for node in witness_chain(witness):
        if node.kind is Kind.INIT:
            bags.append(node.state.bag)
        elif node.kind is Kind.STEP:
            bags.append(node.step_bag)
        else:
            x = node.state.bag
            for _, sub in node.jump_branches:
                bags.extend(x | b for b in sub.bags)
            bags.append(x)
    return PathDecomposition(tuple(bags))


def check_witness(g: Graph, req: SolveRequest, witness: Witness) -> PathDecomposition:
    """Rebuild and verify; raises IntegrityError on any broken guarantee."""
    dec = rebuild(witness)
    univ = req.vertex_set
    verdict = verify(g, dec, universe=univ)
    if not verdict.ok:
        raise IntegrityError(f"rebuilt decomposition invalid: {verdict.to_dict()}")
    if dec.width > req.bag_budget - 1:
        raise IntegrityError(f"width {dec.width} exceeds {req.bag_budget - 1}")
    if not is_I_connected(g, dec, req.seeds):
        raise IntegrityError("rebuilt decomposition is not seed-connected")
    if dec.bags[-1] != witness.state.bag:
        raise IntegrityError("last bag differs from the witness state bag")
    if popcount(dec.bags[0]) != 1 or dec.bags[0] & ~req.seeds:
        raise IntegrityError("first bag is not a single seed")
    return dec


# -- connected pathwidth driver ----------------------------------------------


def caterpillar_spine(g: Graph) -> Optional[list[int]]:
    """Spine of a caterpillar in path order, or None if g is not one."""
    if not g.is_connected() or g.m != g.n - 1:
        return None
    if g.n <= 2:
        return [0]
    inner = [v for v in range(g.n) if g.degree(v) > 1]
    inner_mask = sum(1 << v for v in inner)
    inner_deg = {v: popcount(g.adj[v] & inner_mask) for v in inner}
    if any(d > 2 for d in inner_deg.values()):
        return None
    start = next(v for v in inner if inner_deg[v] <= 1)
    spine, prev, cur = [start], -1, start
    while True:
        nxt = [u for u in members(g.adj[cur] & inner_mask) if u != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        spine.append(cur)
    return spine


def caterpillar_decomposition(g: Graph, spine: list[int]) -> PathDecomposition:
    if g.n == 1:
        return PathDecomposition((1,))
    if g.n == 2:
        return PathDecomposition((1, 3))
    on_spine = sum(1 << v for v in spine)
    bags = [1 << spine[0]]
    for i, p in enumerate(spine):
        for leaf in members(g.adj[p] & ~on_spine):
            bags.append(1 << p | 1 << leaf)
        if i + 1 < len(spine):
            bags.append(1 << p | 1 << spine[i + 1])
    return PathDecomposition(tuple(bags))


@dataclass
class CpwResult:
    cpw: int
    seed: int
    decomposition: PathDecomposition
    per_k: dict[int, dict] = field(default_factory=dict)


def decide_any_seed(solver: XPSolver, k: int) -> tuple[Optional[int], Optional[DPResult], Stats]:
    """Try every start vertex s*; first success wins."""
    total = Stats()
    for s in range(solver.g.n):
        res = solver.run(SolveRequest(solver.g, 1 << s, k))
        total.add(res.stats)
        if res.decision:
            return s, res, total
    return None, None, total


def solve_cpw(g: Graph, config: SolverConfig | None = None) -> CpwResult:
    if g.n == 0 or not g.is_connected():
        raise DisconnectedGraph("connected pathwidth needs a connected, non-empty graph")
    config = config or SolverConfig()
    if g.n == 1:
        return CpwResult(0, 0, PathDecomposition((1,)), {1: {"decision": True, "fast_path": "single vertex"}})
    per_k: dict[int, dict] = {1: {"decision": False, "fast_path": "k=1 needs a single vertex"}}
    if config.fast_paths:
        spine = caterpillar_spine(g)
        if spine is not None:
            per_k[2] = {"decision": True, "fast_path": "caterpillar"}
            return CpwResult(1, spine[0], caterpillar_decomposition(g, spine), per_k)
    solver = XPSolver(g, config)
    for k in range(2, g.n + 1):
        seed, res, stats = decide_any_seed(solver, k)
        per_k[k] = {"decision": seed is not None, "stats": stats.to_dict()}
        if seed is not None:
            dec = check_witness(g, SolveRequest(g, 1 << seed, k), res.witness)
            return CpwResult(k - 1, seed, dec, per_k)
    raise AssertionError("a single bag holding every vertex is always feasible")


def compute_cpw(g: Graph, config: SolverConfig | None = None) -> int:
    return solve_cpw(g, config).cpw
