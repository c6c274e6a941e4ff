import itertools
import random

import pytest
from hypothesis import given, strategies as st

from connpw.decomposition import is_I_connected, verify
from connpw.graph_core import DisconnectedGraph, Graph, GraphError, mask_of
from connpw.oracle import oracle_cpw, oracle_decide
from connpw.xp_solver import (
    IntegrityError,
    Kind,
    SolveRequest,
    SolverConfig,
    SolverState,
    StateCapExceeded,
    XPSolver,
    caterpillar_spine,
    check_witness,
    compute_cpw,
    decide_any_seed,
    potential_state_bound,
    rebuild,
    solve_cpw,
    state_violations,
)
from connpw.workbench.generators import GeneratorSpec, generate

from strategies import connected_graphs

DP = SolverConfig(fast_paths=False)


def gen(family, **params):
    return generate(GeneratorSpec(family, params))


def decide(g, seed, k, config=DP):
    return XPSolver(g, config).run(SolveRequest(g, 1 << seed, k))


def any_seed(g, k, config=DP):
    return decide_any_seed(XPSolver(g, config), k)[0] is not None


P3 = gen("path", n=3)
P4 = gen("path", n=4)
C5 = gen("cycle", n=5)


# -- decide examples ----------------------------------------------------------------

def test_single_vertex():
    g = Graph.from_edges(1, [])
    res = decide(g, 0, 1)
    assert res.decision and rebuild(res.witness).to_lists() == [[0]]


def test_path_examples():
    assert decide(P4, 0, 2).decision
    assert not decide(P4, 0, 1).decision


def test_cycle_examples():
    assert all(decide(C5, s, 3).decision for s in range(5))
    assert not any_seed(C5, 2)


def test_request_validation():
    with pytest.raises(GraphError):
        SolveRequest(P3, 0, 2).validate()
    with pytest.raises(GraphError):
        SolveRequest(P3, 1, 0).validate()
    with pytest.raises(GraphError):
        SolveRequest(Graph.from_edges(3, [(0, 1)]), 1, 2).validate()


# -- successor generation ------------------------------------------------------------

def test_initial_states():
    s = XPSolver(P3)
    assert s.initial_states(SolveRequest(P3, 0b011, 2)) == [SolverState(1, 1), SolverState(2, 2)]
    assert s.initial_states(SolveRequest(P3, 0b100, 2)) == [SolverState(4, 4)]


def test_step_forced_first_move_on_path():
    req = SolveRequest(P3, 1, 2)
    succ = XPSolver(P3).step_successors(req, SolverState(1, 1))
    assert SolverState(0b011, 0b011) in succ


def test_step_excludes_leaf_to_leaf_bag():
    g = gen("star", leaves=3)  # centre 0
    req = SolveRequest(g, 1 << 1, 2)
    succ = XPSolver(g).step_successors(req, SolverState(1 << 1, 1 << 1))
    # candidates keeping the border {1}: {1} (same state), {1,0}, {1,2}, {1,3}; only {1,0} passes S1
    assert succ == [SolverState(0b0011, 0b0011)]


def test_step_on_full_cover_only_shrinks():
    req = SolveRequest(P3, 1, 3)
    succ = XPSolver(P3).step_successors(req, SolverState(0b111, 0b111))
    assert succ and all(s.cover == 0b111 and s.bag & ~0b111 == 0 and s.bag != 0b111 for s in succ)


def test_jump_pruned_for_long_legs():
    g = gen("spider", legs=5, len=2)
    req = SolveRequest(g, 1, 2)
    assert XPSolver(g).jump_successors(req, SolverState(1, 1)) == []


def test_jump_absorbs_star_leaves():
    g = gen("star", leaves=5)
    req = SolveRequest(g, 1, 2)
    succ = XPSolver(g).jump_successors(req, SolverState(1, 1))
    assert SolverState(1, g.vertices) in succ


def test_no_jump_without_bottleneck():
    req = SolveRequest(P4, 1, 2)
    assert XPSolver(P4).jump_successors(req, SolverState(0b0011, 0b0011)) == []


@pytest.mark.parametrize("leaves,k", [(7, 3), (9, 2)])
def test_jump_flip_set_sizes(leaves, k):
    # every flip set D with |D| >= max(1, b - 2k) of the leaves is emitted
    g = gen("star", leaves=leaves)
    succ = XPSolver(g).jump_successors(SolveRequest(g, 1, k), SolverState(1, 1))
    low = max(1, leaves - 2 * k)
    expected = sum(len(list(itertools.combinations(range(leaves), d))) for d in range(low, leaves + 1))
    assert len(succ) == expected


def test_selection_bound_is_realizability():
    # (B, f) with |B| <= 2k and f constant off B selects T exactly when min(|T|, b-|T|) <= 2k
    for b in range(0, 8):
        for two_k in (2, 4):
            for t in range(b + 1):
                realizable = any(
                    # choose B among subsets; f = 1 on T; off B f must be constant
                    len(bset) <= two_k and (set(range(t)) <= set(bset) or set(range(t, b)) <= set(bset))
                    for r in range(b + 1)
                    for bset in itertools.combinations(range(b), r)
                )
                assert realizable == (min(t, b - t) <= two_k)


# -- run / rebuild -----------------------------------------------------------------

def test_star_jump_witness_shape():
    g = gen("star", leaves=5)
    res = decide(g, 0, 2)
    assert res.witness.kind is Kind.JUMP
    assert rebuild(res.witness).to_lists() == [[0]] + [[0, i] for i in range(1, 6)] + [[0]]


def test_path_step_witness():
    res = decide(P4, 0, 2)
    dec = check_witness(P4, SolveRequest(P4, 1, 2), res.witness)
    assert dec.to_lists() == [[0], [0, 1], [1, 2], [2, 3]]


def test_stats_recorded():
    res = decide(gen("star", leaves=5), 0, 2)
    assert res.stats.states >= 1 and res.stats.jumps >= 1 and res.stats.recursion_calls >= 1


def test_state_cap():
    with pytest.raises(StateCapExceeded):
        decide(C5, 0, 2, SolverConfig(max_states=1))


def test_potential_state_bound_formula():
    assert potential_state_bound(3, 1) == 3 * 2 * 9 * 8
    assert potential_state_bound(6, 3) == 6 ** 3 * 2 ** 3 * 6 ** 6 * 2 ** 7


def test_jumps_are_needed():
    g = gen("star", leaves=10)
    assert oracle_decide(g, 1, 2, cap=None)
    assert not decide(g, 0, 2, SolverConfig(fast_paths=False, use_jumps=False)).decision
    assert decide(g, 0, 2).decision


def test_wrong_recursion_budget_is_caught():
    # a sub-budget one too large accepts a spider that the oracle rejects, and the witness breaks
    g = gen("spider", legs=5, len=2)
    assert not oracle_decide(g, 1, 2, cap=None)
    res = decide(g, 0, 2, SolverConfig(fast_paths=False, jump_budget_offset=1))
    assert res.decision
    with pytest.raises(IntegrityError):
        check_witness(g, SolveRequest(g, 1, 2), res.witness)


def test_sub_decomposition_memo():
    g = gen("star", leaves=5)
    solver = XPSolver(g)
    first = solver.sub_decomposition(0b10, 0b10, 1)
    second = solver.sub_decomposition(0b10, 0b10, 1)
    assert first is second and first.to_lists() == [[1]]
    assert solver.sub_decomposition(0b1, 0b1, 0) is None


# -- compute_cpw -----------------------------------------------------------------

@pytest.mark.parametrize("g,expected", [
    (gen("caterpillar", spine=5, legs_per=1), 1),
    (gen("complete", n=5), 4),
    (gen("cycle", n=6), 2),
    (Graph.from_edges(1, []), 0),
])
def test_compute_cpw_examples(g, expected):
    assert compute_cpw(g) == expected
    assert compute_cpw(g, DP) == expected
    assert oracle_cpw(g, cap=None) == expected


def test_compute_cpw_rejects_disconnected():
    with pytest.raises(DisconnectedGraph):
        compute_cpw(Graph.from_edges(2, []))


def test_caterpillar_spine():
    assert caterpillar_spine(gen("caterpillar", spine=4, legs_per=2)) == [0, 1, 2, 3]
    assert caterpillar_spine(gen("spider", legs=3, len=2)) is None
    assert caterpillar_spine(C5) is None
    res = solve_cpw(gen("caterpillar", spine=3, legs_per=2))
    assert res.cpw == 1 and verify(gen("caterpillar", spine=3, legs_per=2), res.decomposition).ok


def test_bushy_graphs_match_oracle():
    # hubs with many pendant vertices make the selection bound bind
    rng = random.Random(11)
    for _ in range(40):
        n, hubs = rng.randint(9, 12), rng.randint(1, 3)
        edges = {(rng.randrange(h), h) for h in range(1, hubs)}
        edges |= {(rng.randrange(hubs), v) for v in range(hubs, n)}
        g = Graph.from_edges(n, sorted(edges))
        assert compute_cpw(g, DP) == oracle_cpw(g, cap=None)


# -- properties -----------------------------------------------------------------

@given(connected_graphs(max_n=6), st.integers(1, 4), st.data())
def test_generated_states_are_valid(g, k, data):
    seed = data.draw(st.integers(0, g.n - 1))
    req = SolveRequest(g, 1 << seed, k)
    solver = XPSolver(g, DP)
    todo, seen = solver.initial_states(req), set()
    while todo:
        w = todo.pop()
        if w in seen:
            continue
        seen.add(w)
        assert state_violations(g, req, w) == []
        todo.extend(solver.step_successors(req, w))
        todo.extend(solver.jump_successors(req, w))
    full = any(s.cover == g.vertices for s in seen)
    assert full == solver.run(req).decision


@given(connected_graphs(max_n=7), st.data())
def test_monotone_in_budget(g, data):
    seed = data.draw(st.integers(0, g.n - 1))
    solver = XPSolver(g, DP)
    answers = [solver.run(SolveRequest(g, 1 << seed, k)).decision for k in range(1, g.n + 1)]
    assert answers == sorted(answers)
    assert answers[-1]


@given(connected_graphs(max_n=7), st.randoms(use_true_random=False))
def test_isomorphism_invariance(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert compute_cpw(g, DP) == compute_cpw(g.relabel(perm), DP)


@given(connected_graphs(max_n=7), st.data())
def test_witness_sound(g, data):
    k = data.draw(st.integers(1, g.n))
    seed = data.draw(st.integers(0, g.n - 1))
    req = SolveRequest(g, 1 << seed, k)
    res = XPSolver(g, DP).run(req)
    assert res.decision == oracle_decide(g, 1 << seed, k, cap=None)
    if res.decision:
        dec = check_witness(g, req, res.witness)
        assert is_I_connected(g, dec, 1 << seed) and dec.bags[0] == 1 << seed


def test_multi_seed_request():
    # two disjoint edges joined through a middle vertex; seeds at both ends
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    seeds = mask_of([0, 4])
    req = SolveRequest(g, seeds, 2)
    res = XPSolver(g, DP).run(req)
    assert res.decision == oracle_decide(g, seeds, 2, cap=None)
    if res.decision:
        check_witness(g, req, res.witness)
