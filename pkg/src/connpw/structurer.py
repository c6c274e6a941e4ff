"""Bag surgery that makes a decomposition S-structured.

For a set S with at least one in-branch, :func:`transform` pulls every
in-branch of S out of the interval I(S) and replays their traces one after
another between two copies of the cheapest "waiting" bag, so that every other
component of G - S is frozen across the new interval of S. Width never grows
and the output is exactly ``d + 1`` bags longer than the input, where ``d``
is the total length of the in-branch traces.
"""
from __future__ import annotations

from dataclasses import dataclass

from .decomposition import (
    BranchReport,
    DecompositionError,
    Interval,
    PathDecomposition,
    classify_branches,
    is_structured,
)
from .graph_core import Graph, VertexSet, is_bottleneck, mask_of, popcount, submasks, to_list


class WidthBudget(DecompositionError):
    pass


class InternalInconsistency(DecompositionError):
    pass


@dataclass(frozen=True)
class TransformPlan:
    s: VertexSet
    t1: int
    t2: int
    c_min: int
    x_star: VertexSet
    d: int
    in_order: tuple[VertexSet, ...]
    in_vertices: VertexSet
    # concatenated in-branch traces, length d
    traces: tuple[VertexSet, ...]


def plan(g: Graph, p: PathDecomposition, s: VertexSet, k: int,
         report: BranchReport | None = None) -> TransformPlan:
    rep = report if report is not None else classify_branches(g, p, s, k)
    iv = rep.require_interval()
    t1, t2 = iv.start, iv.end
    bags = p.bags
    if s & ~bags[t1 - 1] or s & ~bags[t2 - 1]:
        raise InternalInconsistency("S is not contained in the bags bounding its interval")
    waiting = rep.waiting_vertices()
    c_min = min(range(t1, t2 + 1), key=lambda i: (popcount(bags[i - 1] & waiting), i))
    x_star = bags[c_min - 1] & waiting
    order = tuple(rep.in_branches)
    b_in = 0
    traces: list[VertexSet] = []
    for h in order:
        b_in |= h
        sp = rep.spans[h]
        traces.extend(bags[i - 1] & h for i in range(sp.start, sp.end + 1))
    return TransformPlan(s, t1, t2, c_min, x_star, len(traces), order, b_in, tuple(traces))


def apply_plan(p: PathDecomposition, pl: TransformPlan) -> PathDecomposition:
    bags = p.bags
    l = len(bags)
    t1, t2, c, d = pl.t1, pl.t2, pl.c_min, pl.d
    strip = ~pl.in_vertices
    out: list[VertexSet] = []
    out.extend(bags[: t1 - 1])
    out.extend(b & strip for b in bags[t1 - 1: c - 1])
    out.append(bags[c - 1] & strip)
    fixed = pl.x_star | pl.s
    out.extend(fixed | tr for tr in pl.traces)
    out.append(bags[c - 1] & strip)
    # positions c+d+2 .. t2+d+1 hold X_{c+1} .. X_{t2} minus in-branch vertices
    out.extend(b & strip for b in bags[c: t2])
    out.extend(bags[t2:])
    if len(out) != l + d + 1:
        raise InternalInconsistency("length bookkeeping failed")
    return PathDecomposition(tuple(out))


def transform(g: Graph, p: PathDecomposition, s: VertexSet, k: int) -> PathDecomposition:
    if p.width >= k:
        raise WidthBudget(f"decomposition width {p.width} exceeds budget k-1={k - 1}")
    return apply_plan(p, plan(g, p, s, k))


def discover_bottlenecks(g: Graph, p: PathDecomposition, k: int) -> list[VertexSet]:
    """Every bottleneck lies inside some bag, so scanning bag subsets finds all."""
    found = set()
    for bag in set(p.bags):
        for s in submasks(bag):
            if s not in found and is_bottleneck(g, s, k):
                found.add(s)
    return sorted(found, key=lambda s: (popcount(s), to_list(s)))


def structure_all(g: Graph, p: PathDecomposition, k: int, seeds: VertexSet | None = None,
                  bottlenecks: list[VertexSet] | None = None) -> PathDecomposition:
    """Apply :func:`transform` once per bottleneck, in ascending (size, lex) order.

    ``seeds`` is accepted for symmetry with the connectivity checks; the
    transformation itself does not depend on it.
    """
    order = discover_bottlenecks(g, p, k) if bottlenecks is None else bottlenecks
    cur = p
    for s in order:
        cur = transform(g, cur, s, k)
    return cur


def intervals_well_nested(a: Interval, b: Interval) -> bool:
    return a.within(b) or b.within(a) or a.disjoint(b)


def structure_report(g: Graph, p: PathDecomposition, k: int, bottlenecks: list[VertexSet]) -> dict:
    """Check S-structure for every bottleneck and pairwise interval nesting."""
    reps = {s: classify_branches(g, p, s, k) for s in bottlenecks}
    structured = {s: is_structured(g, p, s, k, rep) for s, rep in reps.items()}
    ivs = [rep.require_interval() for rep in reps.values()]
    nested = all(
        intervals_well_nested(ivs[i], ivs[j]) for i in range(len(ivs)) for j in range(i + 1, len(ivs))
    )
    return {"structured": all(structured.values()), "nested": nested, "per_set": structured}


def parse_set(text: str) -> VertexSet:
    return mask_of(int(t) for t in text.split(",") if t.strip())
