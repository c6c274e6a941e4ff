"""Path decompositions: verification, connectivity predicates and the
branch classification used by the structuring transformation.

Bag indices in every public report are 1-based; storage is 0-based.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph_core import (
    Graph,
    VertexSet,
    border,
    components,
    lowest,
    mask_of,
    members,
    neighborhood,
    popcount,
    reach,
    to_list,
)


class DecompositionError(ValueError):
    pass


class NoInBranch(DecompositionError):
    """Raised when an operation needs an in-branch of S and there is none."""


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[VertexSet, ...]

    def __post_init__(self):
        if len(self.bags) == 0:
            raise DecompositionError("a path decomposition has at least one bag")

    @classmethod
    def from_lists(cls, bags: Iterable[Iterable[int]]) -> "PathDecomposition":
        return cls(tuple(mask_of(b) for b in bags))

    def to_lists(self) -> list[list[int]]:
        return [to_list(b) for b in self.bags]

    def __len__(self) -> int:
        return len(self.bags)

    def __getitem__(self, i):
        return self.bags[i]

    @property
    def width(self) -> int:
        return max(popcount(b) for b in self.bags) - 1

    @property
    def vertices(self) -> VertexSet:
        u = 0
        for b in self.bags:
            u |= b
        return u

    def to_json(self) -> str:
        return json.dumps({"bags": self.to_lists()})

    @classmethod
    def from_json(cls, text: str) -> "PathDecomposition":
        data = json.loads(text)
        if not isinstance(data, dict) or "bags" not in data:
            raise DecompositionError('decomposition JSON must be {"bags": [[...], ...]}')
        return cls.from_lists(data["bags"])


@dataclass(frozen=True)
class Interval:
    start: int
    end: int

    def __post_init__(self):
        if not 1 <= self.start <= self.end:
            raise DecompositionError(f"bad interval [{self.start}, {self.end}]")

    def __contains__(self, i: int) -> bool:
        return self.start <= i <= self.end

    def __len__(self) -> int:
        return self.end - self.start + 1

    def within(self, other: "Interval") -> bool:
        return other.start <= self.start and self.end <= other.end

    def disjoint(self, other: "Interval") -> bool:
        return self.end < other.start or other.end < self.start


@dataclass
class Verdict:
    covers: bool = True
    edges: bool = True
    contiguous: bool = True
    nonempty: bool = True
    in_range: bool = True
    width: int = -1
    uncovered_vertex: Optional[int] = None
    missing_edge: Optional[tuple[int, int]] = None
    # (vertex, i, j, k) with v in X_i and X_k but not X_j, 1-based
    gap: Optional[tuple[int, int, int, int]] = None
    empty_bag: Optional[int] = None
    stray_vertex: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.covers and self.edges and self.contiguous and self.nonempty and self.in_range

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "width": self.width,
            "conditions": {
                "i_covers_vertices": {"ok": self.covers, "uncovered_vertex": self.uncovered_vertex},
                "ii_covers_edges": {
                    "ok": self.edges,
                    "missing_edge": list(self.missing_edge) if self.missing_edge else None,
                },
                "iii_contiguous": {"ok": self.contiguous, "violation": list(self.gap) if self.gap else None},
            },
            "nonempty_bags": {"ok": self.nonempty, "empty_bag": self.empty_bag},
            "bags_in_graph": {"ok": self.in_range, "stray_vertex": self.stray_vertex},
        }


def verify(g: Graph, p: PathDecomposition, universe: VertexSet | None = None) -> Verdict:
    """Check conditions (i)-(iii) against G (or G[universe])."""
    univ = g.vertices if universe is None else universe
    out = Verdict(width=p.width)
    allowed_empty = univ == 0 and len(p) == 1
    for idx, bag in enumerate(p.bags, 1):
        if bag & ~univ and out.in_range:
            out.in_range = False
            out.stray_vertex = lowest(bag & ~univ)
        if not bag and not allowed_empty and out.nonempty:
            out.nonempty = False
            out.empty_bag = idx
    missing = univ & ~p.vertices
    if missing:
        out.covers = False
        out.uncovered_vertex = lowest(missing)
    for u in members(univ):
        for v in members(g.adj[u] & univ):
            if u < v and not any(b >> u & 1 and b >> v & 1 for b in p.bags):
                out.edges = False
                out.missing_edge = (u, v)
                break
        if not out.edges:
            break
    for v in members(p.vertices):
        idxs = [i for i, b in enumerate(p.bags, 1) if b >> v & 1]
        for a, b in zip(idxs, idxs[1:]):
            if b != a + 1:
                out.contiguous = False
                out.gap = (v, a, a + 1, b)
                break
        if not out.contiguous:
            break
    return out


def _prefix_unions(p: PathDecomposition):
    acc = 0
    for b in p.bags:
        acc |= b
        yield acc


def is_connected_decomposition(g: Graph, p: PathDecomposition) -> bool:
    for pre in _prefix_unions(p):
        if reach(g, pre & -pre, pre) != pre:
            return False
    return True


def is_I_connected(g: Graph, p: PathDecomposition, seeds: VertexSet) -> bool:
    # checking components suffices: any connected subgraph sits in one
    for pre in _prefix_unions(p):
        if reach(g, seeds & pre, pre) != pre:
            return False
    return True


def is_partial_connected(g: Graph, p: PathDecomposition) -> bool:
    covered = p.vertices
    if not verify(g, p, universe=covered).ok:
        return False
    if not is_connected_decomposition(g, p):
        return False
    return border(g, covered) & ~p.bags[-1] == 0


def subgraph_interval(p: PathDecomposition, h: VertexSet) -> Interval:
    idxs = [i for i, b in enumerate(p.bags, 1) if b & h]
    if not idxs:
        raise DecompositionError("subgraph does not meet any bag")
    if idxs[-1] - idxs[0] + 1 != len(idxs):
        raise DecompositionError("occurrence range of subgraph is not contiguous")
    return Interval(idxs[0], idxs[-1])


def compact(p: PathDecomposition) -> PathDecomposition:
    """Drop bags contained in a neighbouring bag (repeat until stable)."""
    bags = list(p.bags)
    changed = True
    while changed and len(bags) > 1:
        changed = False
        for i, b in enumerate(bags):
            left = bags[i - 1] if i > 0 else None
            right = bags[i + 1] if i + 1 < len(bags) else None
            if (left is not None and b & ~left == 0) or (right is not None and b & ~right == 0):
                del bags[i]
                changed = True
                break
    return PathDecomposition(tuple(bags))


class Label(enum.Enum):
    IN = "in"
    PRE = "pre"
    POST = "post"
    NON_BRANCH = "non_branch"
    OTHER = "other"


@dataclass
class BranchReport:
    base: VertexSet
    k: int
    interval: Optional[Interval]
    labels: dict[VertexSet, Label] = field(default_factory=dict)
    spans: dict[VertexSet, Interval] = field(default_factory=dict)

    def of(self, label: Label) -> list[VertexSet]:
        return [c for c, lab in self.labels.items() if lab is label]

    @property
    def in_branches(self) -> list[VertexSet]:
        """In-branches ordered by first occurrence (ties by smallest vertex)."""
        return sorted(self.of(Label.IN), key=lambda c: (self.spans[c].start, lowest(c)))

    @property
    def has_in_branch(self) -> bool:
        return self.interval is not None

    @property
    def not_in_count(self) -> int:
        """Branches that are not in-branches (pre, post or unclassified)."""
        return sum(1 for lab in self.labels.values() if lab in (Label.PRE, Label.POST, Label.OTHER))

    @property
    def within_bound(self) -> bool:
        return self.not_in_count <= 2 * self.k

    def waiting_vertices(self) -> VertexSet:
        """Union of pre-, post- and non-branch components."""
        u = 0
        for c, lab in self.labels.items():
            if lab in (Label.PRE, Label.POST, Label.NON_BRANCH):
                u |= c
        return u

    def require_interval(self) -> Interval:
        if self.interval is None:
            raise NoInBranch(f"set {to_list(self.base)} has no in-branch")
        return self.interval

    def to_dict(self) -> dict:
        return {
            "base": to_list(self.base),
            "interval": [self.interval.start, self.interval.end] if self.interval else None,
            "components": [
                {"vertices": to_list(c), "label": lab.value, "span": [self.spans[c].start, self.spans[c].end]}
                for c, lab in sorted(self.labels.items(), key=lambda kv: lowest(kv[0]))
            ],
        }


def classify_branches(g: Graph, p: PathDecomposition, s: VertexSet, k: int) -> BranchReport:
    if not s:
        raise DecompositionError("S must be non-empty")
    bags = p.bags
    comps = components(g, g.vertices & ~s)
    spans = {c: subgraph_interval(p, c) for c in comps}
    is_branch = {c: neighborhood(g, c) == s for c in comps}
    labels: dict[VertexSet, Label] = {}
    for c in comps:
        if not is_branch[c]:
            labels[c] = Label.NON_BRANCH
        else:
            sp = spans[c]
            if s & ~bags[sp.start - 1] == 0 and s & ~bags[sp.end - 1] == 0:
                labels[c] = Label.IN
    ins = [c for c in comps if labels.get(c) is Label.IN]
    interval = None
    if ins:
        interval = Interval(min(spans[c].start for c in ins), max(spans[c].end for c in ins))
    for c in comps:
        if c in labels:
            continue
        sp = spans[c]
        if interval is None:
            labels[c] = Label.OTHER
        elif sp.start < interval.start:
            labels[c] = Label.PRE
        elif sp.end > interval.end:
            labels[c] = Label.POST
        else:
            labels[c] = Label.OTHER
    return BranchReport(s, k, interval, labels, spans)


def waits_in(p: PathDecomposition, h: VertexSet, iv: Interval) -> bool:
    if iv.end > len(p):
        raise DecompositionError("interval exceeds decomposition length")
    first = p.bags[iv.start - 1] & h
    return all(p.bags[i - 1] & h == first for i in range(iv.start, iv.end + 1))


def is_structured(g: Graph, p: PathDecomposition, s: VertexSet, k: int,
                  report: BranchReport | None = None) -> bool:
    rep = report if report is not None else classify_branches(g, p, s, k)
    iv = rep.require_interval()
    return all(
        waits_in(p, c, iv)
        for c, lab in rep.labels.items()
        if lab is not Label.IN
    )
