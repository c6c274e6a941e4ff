import itertools

import pytest
from hypothesis import given, strategies as st

from connpw.graph_core import (
    BottleneckIndex,
    DisconnectedGraph,
    Graph,
    GraphError,
    branch_family,
    border,
    components,
    enumerate_bottlenecks,
    format_edge_list,
    is_bottleneck,
    mask_of,
    members,
    neighborhood,
    parse_edge_list,
    popcount,
    read_graph,
    submasks,
    to_list,
    write_graph,
)

from strategies import graphs


def naive_components(g, within):
    """Plain-set BFS, independent of the bitmask code."""
    left, out = set(to_list(within)), []
    while left:
        start = min(left)
        seen, todo = {start}, [start]
        while todo:
            u = todo.pop()
            for v in range(g.n):
                if v in left and v not in seen and g.has_edge(u, v):
                    seen.add(v)
                    todo.append(v)
        left -= seen
        out.append(frozenset(seen))
    return out


def naive_branches(g, s):
    sset = set(to_list(s))
    out = []
    for comp in naive_components(g, g.vertices & ~s):
        nb = {v for u in comp for v in range(g.n) if g.has_edge(u, v)} - comp
        if nb == sset:
            out.append(comp)
    return out


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def double_star(per_side):
    edges = [(0, 1)]
    nxt = 2
    for centre in (0, 1):
        for _ in range(per_side):
            edges.append((centre, nxt))
            nxt += 1
    return Graph.from_edges(nxt, edges)


P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
K4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))


# -- bitmask helpers ----------------------------------------------------------

def test_mask_round_trip():
    assert to_list(mask_of([5, 0, 3])) == [0, 3, 5]
    assert list(members(0)) == []
    assert popcount(mask_of(range(70))) == 70  # beyond one machine word


def test_submasks_order_by_size_then_lex():
    assert submasks(0b111) == [0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]
    assert submasks(0b111, max_size=1) == [0b001, 0b010, 0b100]


# -- Graph construction --------------------------------------------------------

@pytest.mark.parametrize("n,edges", [(2, [(0, 0)]), (2, [(0, 2)]), (3, [(0, 1), (1, 0)]), (-1, [])])
def test_from_edges_rejects_bad_input(n, edges):
    with pytest.raises(GraphError):
        Graph.from_edges(n, edges)


def test_graph_basics():
    assert P3.m == 2 and P3.degree(1) == 2 and P3.is_connected()
    assert not Graph.from_edges(3, [(0, 1)]).is_connected()
    sub, keep = K4.induced(0b1011)
    assert keep == [0, 1, 3] and sub.m == 3


def test_relabel_preserves_edge_count():
    g = double_star(2)
    h = g.relabel(list(reversed(range(g.n))))
    assert h.m == g.m and sorted(map(h.degree, range(h.n))) == sorted(map(g.degree, range(g.n)))


# -- spec examples -------------------------------------------------------------

def test_neighborhood_examples():
    assert neighborhood(P3, 0b010) == 0b101
    assert neighborhood(P3, P3.vertices) == 0
    assert neighborhood(K4, 0b0001) == 0b1110
    assert neighborhood(P3, 0) == 0


def test_components_examples():
    assert components(P3, 0b101) == [0b001, 0b100]
    assert components(P3, 0) == []
    c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert components(c5, 0b11110) == [0b11110]


def test_branch_family_examples():
    fam = branch_family(P3, 0b010)
    assert fam.branches == (0b001, 0b100) and fam.non_branch_components == ()
    assert branch_family(star(7), 1).branches == tuple(1 << i for i in range(1, 8))
    assert branch_family(P3, 0b001).branches == (0b110,)
    with pytest.raises(GraphError):
        branch_family(P3, 0)


def test_is_bottleneck_examples():
    assert is_bottleneck(star(7), 1, 3)
    assert not is_bottleneck(star(7), 1, 4)
    assert not is_bottleneck(P3, 0b010, 1)


def test_enumerate_bottlenecks_examples():
    assert enumerate_bottlenecks(star(7), 1, 3) == [1]
    for x in submasks(K4.vertices, 2):
        assert enumerate_bottlenecks(K4, x, 2) == []


def test_double_star_matches_brute_force():
    g = double_star(5)
    expected = [s for s in submasks(0b11) if len(naive_branches(g, s)) >= 5]
    assert enumerate_bottlenecks(g, 0b11, 2) == expected
    assert expected == [0b01, 0b10]


def test_border():
    p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert border(p4, 0b0011) == 0b0010
    assert border(p4, p4.vertices) == 0
    assert border(p4, 0b0011, universe=0b0011) == 0


def test_bottleneck_index_caches():
    idx = BottleneckIndex(star(7), 3)
    assert idx.family(1) is idx.family(1)
    assert idx.bottlenecks_in(0b11) == (1,)


# -- edge list I/O ---------------------------------------------------------------

def test_edge_list_round_trip(tmp_path):
    g = double_star(3)
    path = tmp_path / "g.txt"
    write_graph(g, path)
    assert read_graph(path) == g
    assert parse_edge_list(format_edge_list(g)) == g


def test_edge_list_comments_and_errors():
    g = parse_edge_list("# a path\n3 2\n0 1 # first\n\n1 2\n")
    assert g == P3
    for bad in ("3 2\n0 1\n", "3 1\n1 0\n", "x\n", "", "2 1\n0 5\n"):
        with pytest.raises(GraphError):
            parse_edge_list(bad)


# -- properties --------------------------------------------------------------------

@given(graphs(max_n=8), st.data())
def test_components_match_naive_bfs(g, data):
    within = data.draw(st.integers(0, g.vertices))
    assert [frozenset(to_list(c)) for c in components(g, within)] == naive_components(g, within)


@given(graphs(min_n=1, max_n=8), st.data())
def test_branch_family_partitions_graph(g, data):
    s = data.draw(st.integers(1, g.vertices))
    fam = branch_family(g, s)
    parts = [s, *fam.all_components]
    union = 0
    for part in parts:
        assert union & part == 0
        union |= part
    assert union == g.vertices
    assert [frozenset(to_list(b)) for b in fam.branches] == naive_branches(g, s)
    assert branch_family(g, s) == fam  # deterministic


def _bottlenecks(g, k, max_size):
    return [s for s in submasks(g.vertices, max_size) if is_bottleneck(g, s, k)]


# graphs with several bottlenecks, for the enumeration-based checks
MULTI_BOTTLENECK_GRAPHS = [star(5), star(7), double_star(5), double_star(3),
                Graph.from_edges(7, [(i, 2 + j) for i in range(2) for j in range(5)]),  # K_{2,5}
                Graph.from_edges(8, [(0, 1), (1, 2)] + [(1, v) for v in range(3, 8)]),
                # K_{2,5} with five pendant leaves on vertex 0: {0} and {0,1} are both bottlenecks at k=2
                Graph.from_edges(12, [(i, 2 + j) for i in range(2) for j in range(5)]
                                 + [(0, v) for v in range(7, 12)])]


def _nesting_pairs_checked(g, k):
    bns = _bottlenecks(g, k, 3)
    checked = 0
    for s, s2 in itertools.permutations(bns, 2):
        if s2 & ~s or s2 == s:
            continue  # want s2 a proper subset of s
        inner = 0
        for h in branch_family(g, s).branches:
            inner |= h
        inner |= s & ~s2
        fam2 = branch_family(g, s2)
        hosts = [h for h in fam2.branches if inner & ~h == 0]
        assert len(hosts) == 1
        others = set(fam2.branches) - set(hosts)
        assert others <= set(branch_family(g, s).non_branch_components)
        checked += 1
    return checked


def test_nesting_of_bottlenecks():
    checked = sum(_nesting_pairs_checked(g, k) for g in MULTI_BOTTLENECK_GRAPHS for k in (1, 2))
    assert checked > 0


@given(graphs(min_n=4, max_n=9))
def test_nesting_and_one_component_on_random_graphs(g):
    _nesting_pairs_checked(g, 1)
    _one_component_pairs(g, 1)


def _one_component_pairs(g, k):
    checked = 0
    for s, s2 in itertools.permutations(_bottlenecks(g, k, 3), 2):
        if s2 & ~s == 0:
            continue
        hits = [h for h in components(g, g.vertices & ~s) if s2 & ~(s | h) == 0]
        assert len(hits) == 1
        checked += 1
    return checked


def test_one_component_property():
    assert sum(_one_component_pairs(g, k) for g in MULTI_BOTTLENECK_GRAPHS for k in (1, 2)) > 0


def test_disconnected_graph_is_a_graph_error():
    assert issubclass(DisconnectedGraph, GraphError)
