import pytest
from hypothesis import assume, given, strategies as st

from connpw.decomposition import (
    Interval,
    PathDecomposition,
    classify_branches,
    is_I_connected,
    is_structured,
    verify,
)
from connpw.graph_core import Graph, mask_of, popcount
from connpw.oracle import oracle_cpw_with_seed, oracle_decomposition
from connpw.structurer import (
    WidthBudget,
    apply_plan,
    discover_bottlenecks,
    intervals_well_nested,
    parse_set,
    plan,
    structure_all,
    structure_report,
    transform,
)
from connpw.workbench.suite import candidate_sets, transform_outcome

from strategies import connected_graphs

PD = PathDecomposition.from_lists


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


STAR5 = star(5)
STAR5_DEC = PD([[0, i] for i in range(1, 6)])


def test_star_plan():
    pl = plan(STAR5, STAR5_DEC, 1, 2)
    assert (pl.t1, pl.t2, pl.c_min, pl.x_star, pl.d) == (1, 5, 1, 0, 5)


def test_star_transform_output():
    out = transform(STAR5, STAR5_DEC, 1, 2)
    assert out.to_lists() == [[0]] + [[0, i] for i in range(1, 6)] + [[0]] * 5
    assert len(out) == 11 and out.width == 1
    assert verify(STAR5, out).ok
    assert is_structured(STAR5, out, 1, 2)
    assert is_I_connected(STAR5, out, 1)


def two_pre_branches():
    # centre c=0, in-branch leaves 1..3, pre-branches {u=4,w=5} and {x=6,y=7}
    g = Graph.from_edges(8, [(0, 1), (0, 2), (0, 3), (4, 5), (0, 5), (6, 7), (0, 7)])
    p = PD([[4, 5], [5, 6], [0, 5, 6, 1], [0, 6, 2], [0, 6, 7, 3]])
    return g, p


def test_c_min_picks_lightest_waiting_bag():
    g, p = two_pre_branches()
    assert verify(g, p).ok
    rep = classify_branches(g, p, 1, 4)
    assert rep.interval == Interval(3, 5)
    waiting = rep.waiting_vertices()
    sizes = [popcount(p.bags[i - 1] & waiting) for i in range(3, 6)]
    assert sizes == [2, 1, 2]
    brute = min(range(3, 6), key=lambda i: (sizes[i - 3], i))
    pl = plan(g, p, 1, 4, rep)
    assert pl.c_min == brute == 4
    assert pl.x_star == mask_of([6])


def test_two_pre_branch_transform():
    g, p = two_pre_branches()
    out = transform(g, p, 1, 4)
    assert len(out) == len(p) + 3 + 1
    assert out.bags[:2] == p.bags[:2]
    assert verify(g, out).ok and out.width <= p.width
    assert is_structured(g, out, 1, 4)


def test_x_star_empty_when_everything_is_in_branch():
    pl = plan(STAR5, PD([[0, 1, 2], [0, 3], [0, 4, 5]]), 1, 2)
    assert pl.x_star == 0


def test_width_budget_enforced():
    with pytest.raises(WidthBudget):
        transform(STAR5, STAR5_DEC, 1, 1)


def test_structure_all_identity_without_bottlenecks():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    p = PD([[0], [0, 1], [1, 2], [2, 3]])
    assert discover_bottlenecks(g, p, 2) == []
    assert structure_all(g, p, 2) == p


def test_structure_all_on_star_is_single_transform():
    assert structure_all(STAR5, STAR5_DEC, 2) == transform(STAR5, STAR5_DEC, 1, 2)


def test_structure_all_double_broom():
    # two adjacent centres with five leaves each: two bottlenecks at k=2
    edges = [(0, 1)] + [(0, v) for v in range(2, 7)] + [(1, v) for v in range(7, 12)]
    g = Graph.from_edges(12, edges)
    cpw, seed = oracle_cpw_with_seed(g, cap=None)
    p = oracle_decomposition(g, 1 << seed, cpw + 1, cap=None)
    bns = discover_bottlenecks(g, p, cpw + 1)
    assert bns == [0b01, 0b10]
    out = structure_all(g, p, cpw + 1, 1 << seed)
    rep = structure_report(g, out, cpw + 1, bns)
    assert rep["structured"] and rep["nested"]
    assert verify(g, out).ok and is_I_connected(g, out, 1 << seed)


def test_interval_nesting_helper():
    assert intervals_well_nested(Interval(2, 3), Interval(1, 5))
    assert intervals_well_nested(Interval(1, 2), Interval(3, 4))
    assert not intervals_well_nested(Interval(1, 3), Interval(2, 4))


def test_parse_set():
    assert parse_set("0, 2,5") == 0b100101
    assert parse_set("") == 0


@given(connected_graphs(min_n=2, max_n=8), st.data())
def test_transform_properties(g, data):
    cpw, seed = oracle_cpw_with_seed(g, cap=None)
    budget = cpw + 1 + data.draw(st.integers(0, 1))
    assume(budget <= g.n)
    p = oracle_decomposition(g, 1 << seed, budget, cap=None)
    k = p.width + 1
    sets = candidate_sets(g, p, k)
    assume(sets)
    s = data.draw(st.sampled_from(sets))
    out = transform_outcome(g, p, s, k, 1 << seed)
    assert out.ok, out


@given(connected_graphs(min_n=2, max_n=8))
def test_structure_all_properties(g):
    cpw, seed = oracle_cpw_with_seed(g, cap=None)
    p = oracle_decomposition(g, 1 << seed, cpw + 1, cap=None)
    k = p.width + 1
    bns = discover_bottlenecks(g, p, k)
    out = structure_all(g, p, k, 1 << seed, bns)
    assert verify(g, out).ok and out.width <= p.width
    assert is_I_connected(g, out, 1 << seed)
    if bns:
        rep = structure_report(g, out, k, bns)
        assert rep["structured"] and rep["nested"]
    else:
        assert out == p
