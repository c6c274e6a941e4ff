"""Immutable simple graphs with vertex sets stored as int bitmasks.

A vertex set is a plain ``int`` whose bit ``v`` is set iff vertex ``v`` is a
member. Python ints are unbounded, so graphs beyond 64 vertices need no
special handling.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

VertexSet = int


def mask_of(vertices: Iterable[int]) -> VertexSet:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: VertexSet) -> Iterator[int]:
    """Yield the vertices of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: VertexSet) -> list[int]:
    return list(members(mask))


def popcount(mask: VertexSet) -> int:
    return bin(mask).count("1")


def lowest(mask: VertexSet) -> int:
    return (mask & -mask).bit_length() - 1


def submasks(mask: VertexSet, max_size: int | None = None) -> list[VertexSet]:
    """Non-empty subsets of ``mask`` by increasing size, then lexicographically."""
    verts = to_list(mask)
    top = len(verts) if max_size is None else min(max_size, len(verts))
    out = []
    for r in range(1, top + 1):
        for combo in itertools.combinations(verts, r):
            out.append(mask_of(combo))
    return out


class GraphError(ValueError):
    pass


class DisconnectedGraph(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the neighbour bitmask of ``v``. Use :meth:`from_edges` to
    build one; the constructor trusts its input.
    """

    n: int
    adj: tuple[int, ...]
    _edges: tuple[tuple[int, int], ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphError("negative vertex count")
        adj = [0] * n
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"multi-edge {key}")
            seen.add(key)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), tuple(sorted(seen)))

    @property
    def vertices(self) -> VertexSet:
        return (1 << self.n) - 1

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        if not self._edges and any(self.adj):
            es = tuple((u, v) for u in range(self.n) for v in members(self.adj[u]) if u < v)
            object.__setattr__(self, "_edges", es)
        return self._edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def is_connected(self) -> bool:
        return self.n > 0 and reach(self, 1, self.vertices) == self.vertices

    def induced(self, keep: VertexSet) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..|keep|-1`` plus the old ids."""
        old = to_list(keep)
        new_id = {v: i for i, v in enumerate(old)}
        es = [(new_id[u], new_id[v]) for u, v in self.edges if u in new_id and v in new_id]
        return Graph.from_edges(len(old), es), old

    def relabel(self, perm: list[int]) -> "Graph":
        """Apply vertex map ``v -> perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges])


def neighborhood(g: Graph, y: VertexSet) -> VertexSet:
    """Open neighbourhood of ``y``: vertices outside ``y`` adjacent to it."""
    out = 0
    adj = g.adj
    for v in members(y):
        out |= adj[v]
    return out & ~y


def reach(g: Graph, start: VertexSet, within: VertexSet) -> VertexSet:
    """Vertices of ``within`` reachable from ``start & within`` inside G[within]."""
    adj = g.adj
    seen = start & within
    frontier = seen
    while frontier:
        nxt = 0
        for v in members(frontier):
            nxt |= adj[v]
        frontier = nxt & within & ~seen
        seen |= frontier
    return seen


def components(g: Graph, within: VertexSet) -> list[VertexSet]:
    """Connected components of G[within], ordered by smallest member."""
    out = []
    rest = within
    while rest:
        comp = reach(g, rest & -rest, within)
        out.append(comp)
        rest &= ~comp
    return out


def border(g: Graph, cover: VertexSet, universe: VertexSet | None = None) -> VertexSet:
    """Members of ``cover`` with a neighbour outside it (inside ``universe``)."""
    outside = (g.vertices if universe is None else universe) & ~cover
    adj = g.adj
    b = 0
    for v in members(cover):
        if adj[v] & outside:
            b |= 1 << v
    return b


@dataclass(frozen=True)
class BranchFamily:
    base: VertexSet
    branches: tuple[VertexSet, ...]
    non_branch_components: tuple[VertexSet, ...]

    @property
    def all_components(self) -> tuple[VertexSet, ...]:
        return tuple(sorted(self.branches + self.non_branch_components, key=lowest))


def branch_family(g: Graph, s: VertexSet, universe: VertexSet | None = None) -> BranchFamily:
    """Split the components of G - s into s-branches and the rest.

    A component H is an s-branch iff N(H) == s exactly. ``universe`` restricts
    everything to an induced subgraph (used by recursive solver calls).
    """
    if not s:
        raise GraphError("branch_family needs a non-empty base set")
    within = (g.vertices if universe is None else universe) & ~s
    branches, others = [], []
    for comp in components(g, within):
        nb = neighborhood(g, comp)
        if universe is not None:
            nb &= universe
        (branches if nb == s else others).append(comp)
    return BranchFamily(s, tuple(branches), tuple(others))


def is_bottleneck(g: Graph, s: VertexSet, k: int) -> bool:
    return len(branch_family(g, s).branches) >= 2 * k + 1


def enumerate_bottlenecks(g: Graph, x: VertexSet, k: int) -> list[VertexSet]:
    """All non-empty bottlenecks contained in ``x`` (|x| <= k expected)."""
    return [s for s in submasks(x) if is_bottleneck(g, s, k)]


class BottleneckIndex:
    """Per-run cache of branch families and bottleneck lists.

    Not thread-safe; each solver run owns one.
    """

    def __init__(self, g: Graph, k: int, universe: VertexSet | None = None):
        self.g = g
        self.k = k
        self.universe = g.vertices if universe is None else universe
        self._families: dict[int, BranchFamily] = {}
        self._inside: dict[int, tuple[int, ...]] = {}

    def family(self, s: VertexSet) -> BranchFamily:
        fam = self._families.get(s)
        if fam is None:
            fam = branch_family(self.g, s, self.universe)
            self._families[s] = fam
        return fam

    def bottlenecks_in(self, x: VertexSet) -> tuple[int, ...]:
        hit = self._inside.get(x)
        if hit is None:
            need = 2 * self.k + 1
            hit = tuple(s for s in submasks(x) if len(self.family(s).branches) >= need)
            self._inside[x] = hit
        return hit


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format; ``#`` starts a comment."""
    tokens: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.append(line.split())
    if not tokens:
        raise GraphError("empty graph file")
    try:
        n, m = (int(t) for t in tokens[0])
    except ValueError as exc:
        raise GraphError(f"bad header {tokens[0]!r}") from exc
    if len(tokens) - 1 != m:
        raise GraphError(f"header announces {m} edges, found {len(tokens) - 1}")
    edges = []
    for row in tokens[1:]:
        if len(row) != 2:
            raise GraphError(f"bad edge line {row!r}")
        u, v = int(row[0]), int(row[1])
        if not u < v:
            raise GraphError(f"edge must satisfy u < v, got {u} {v}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))
