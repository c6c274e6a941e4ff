"""Brute-force ground truth.

``oracle_decide`` plays the monotone connected node-search game one vertex at
a time: a searcher is placed on a seed or on a neighbour of the cleared area,
and a searcher is lifted once every neighbour of its vertex is cleared.
Reaching "everything cleared" with at most ``budget`` searchers on the graph
at any moment is the same as having a seed-connected path decomposition of
width ``budget - 1``. This module shares nothing with the XP solver beyond the
graph type.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .decomposition import PathDecomposition
from .graph_core import DisconnectedGraph, Graph, GraphError, VertexSet, members, popcount, reach

DEFAULT_CAP = 20


class Infeasible(Exception):
    pass


class CapExceeded(GraphError):
    pass


@dataclass(frozen=True)
class SearchConfiguration:
    covered: VertexSet
    bag: VertexSet


def _moves(g: Graph, conf: SearchConfiguration, seeds: VertexSet, budget: int):
    adj = g.adj
    c, b = conf.covered, conf.bag
    if popcount(b) < budget:
        frontier = seeds
        for v in members(c):
            frontier |= adj[v]
        for v in members(frontier & ~c):
            yield SearchConfiguration(c | 1 << v, b | 1 << v), v
    for v in members(b):
        if adj[v] & ~c == 0:
            yield SearchConfiguration(c, b & ~(1 << v)), None


def _search(g: Graph, starts: list[SearchConfiguration], seeds: VertexSet, budget: int):
    """BFS; returns (accepting configuration, parent map) or (None, parent map)."""
    full = g.vertices
    parent: dict[SearchConfiguration, tuple] = {s: (None, None) for s in starts}
    queue = deque(starts)
    while queue:
        conf = queue.popleft()
        if conf.covered == full:
            return conf, parent
        for nxt, added in _moves(g, conf, seeds, budget):
            if nxt in parent:
                continue
            parent[nxt] = (conf, added)
            queue.append(nxt)
    return None, parent


def _check_request(g: Graph, seeds: VertexSet, cap: int | None):
    if g.n == 0:
        raise GraphError("oracle needs a non-empty graph")
    if not seeds:
        raise GraphError("oracle needs a non-empty seed set")
    if cap is not None and g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds oracle cap {cap}")


def oracle_decide(g: Graph, seeds: VertexSet, bag_budget: int, cap: int | None = DEFAULT_CAP) -> bool:
    _check_request(g, seeds, cap)
    if bag_budget < 1:
        return False
    hit, _ = _search(g, [SearchConfiguration(0, 0)], seeds, bag_budget)
    return hit is not None


def oracle_decomposition(g: Graph, seeds: VertexSet, bag_budget: int,
                         cap: int | None = DEFAULT_CAP) -> PathDecomposition:
    """Replay the BFS path; one bag per placement, taken right after it."""
    _check_request(g, seeds, cap)
    if bag_budget < 1:
        raise Infeasible("budget must be positive")
    hit, parent = _search(g, [SearchConfiguration(0, 0)], seeds, bag_budget)
    if hit is None:
        raise Infeasible(f"no seed-connected decomposition with bags of size <= {bag_budget}")
    bags = []
    conf = hit
    while conf is not None:
        prev, added = parent[conf]
        if added is not None:
            bags.append(conf.bag)
        conf = prev
    bags.reverse()
    return PathDecomposition(tuple(bags))


def _require_connected(g: Graph):
    if g.n == 0 or reach(g, 1, g.vertices) != g.vertices:
        raise DisconnectedGraph("connected pathwidth needs a connected graph")


def oracle_cpw(g: Graph, cap: int | None = DEFAULT_CAP) -> int:
    _require_connected(g)
    if cap is not None and g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds oracle cap {cap}")
    for budget in range(1, g.n + 1):
        if any(oracle_decide(g, 1 << s, budget, cap) for s in range(g.n)):
            return budget - 1
    raise AssertionError("single-bag decomposition always exists")


def oracle_cpw_with_seed(g: Graph, cap: int | None = DEFAULT_CAP) -> tuple[int, int]:
    """(cpw, a seed achieving it)."""
    _require_connected(g)
    for budget in range(1, g.n + 1):
        for s in range(g.n):
            if oracle_decide(g, 1 << s, budget, cap):
                return budget - 1, s
    raise AssertionError("unreachable")


def oracle_pathwidth(g: Graph, cap: int | None = DEFAULT_CAP) -> int:
    """Exact pathwidth as vertex separation number, DP over vertex subsets."""
    n = g.n
    if cap is not None and n > cap:
        raise CapExceeded(f"n={n} exceeds pathwidth DP cap {cap}")
    if n == 0:
        return 0
    adj = g.adj
    full = (1 << n) - 1
    best = [0] * (1 << n)
    for s in range(1, full + 1):
        outside = full & ~s
        boundary = 0
        low = n + 1
        rest = s
        while rest:
            bit = rest & -rest
            v = bit.bit_length() - 1
            if adj[v] & outside:
                boundary += 1
            prev = best[s ^ bit]
            if prev < low:
                low = prev
            rest ^= bit
        best[s] = boundary if boundary > low else low
    return best[full]
