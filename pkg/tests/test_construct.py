import itertools
import math
import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lamchoose.assignments import l_colour, validate_assignment
from lamchoose.construct import (ConstructionParams, ParamError, adversarial_family,
                                 binomial_bounds, build_graph,
                                 check_expansion, check_no_bad_pair, construct,
                                 cut_short_cycles, edge_budget, feasibility_report,
                                 labelling_text, list_family_size, montecarlo_expansion,
                                 montecarlo_short_cycles, occupied_groups, parse_labelling,
                                 random_binomial_triple, sample_base_graph,
                                 sample_split_labelling, sample_uniform_graph, stage_rng,
                                 t_for, verify_construction)
from lamchoose.gadgets import gadgets_for
from lamchoose.graph import (PartiteGraph, complete_bipartite, degeneracy, girth,
                             serialize_graph)
from lamchoose.partitions import Partition

P = Partition.parse


def params(lam="1,1", target="2", g=5, eps=0.04, n=12, seed=3):
    return ConstructionParams(P(lam), (P(target),), g, eps, n, seed)


# -- binomial inequalities -----------------------------------------------------------

@pytest.mark.parametrize("a, b, x", [(10, 3, 0), (10, 3, 2), (100, 10, 5)])
def test_binomial_examples(a, b, x):
    assert binomial_bounds(a, b, x).all_hold


def test_binomial_x_zero_ratios_are_one():
    a, b = 10, 3
    assert Fraction(math.comb(a, b), math.comb(a, b)) == 1
    assert binomial_bounds(a, b, 0).ineq2 and binomial_bounds(a, b, 0).ineq3


def test_binomial_rejects_invalid_triples():
    with pytest.raises(ValueError):
        binomial_bounds(10, 3, 3)
    with pytest.raises(ValueError):
        binomial_bounds(10, 6, 4)


def test_binomial_random_triples():
    rng = random.Random(11)
    for _ in range(300):
        a, b, x = random_binomial_triple(rng)
        assert 0 <= x < b and b + x < a <= 200
        assert binomial_bounds(a, b, x).all_hold


# -- parameters ------------------------------------------------------------------

def test_edge_budget_matches_decimal_evaluation():
    getcontext().prec = 50
    exact = int((3 * Decimal(100) ** Decimal("1.1")).to_integral_value(rounding="ROUND_FLOOR"))
    assert exact == 475 == edge_budget(3, 100, 0.05)


def test_family_sizes():
    assert list_family_size(P("1,1")) == 1
    assert list_family_size(P("2")) == 3
    assert list_family_size(P("1,2")) == 3
    assert list_family_size(P("2,2")) == 9
    assert t_for(P("2"), 1) == 12 and t_for(P("2"), 5) == 60


def test_param_violations():
    assert params().violations() == []
    assert any("multiple" in v for v in params(n=10).violations())
    assert any("epsilon" in v for v in params(eps=0.06).violations())
    assert any("<=" in v for v in params(lam="2", target="1,1").violations())
    with pytest.raises(ParamError):
        params(g=2).validate()


def test_params_text_round_trip():
    p = params(lam="3,1", target="2,2", n=9)
    assert p.r == 5
    assert ConstructionParams.from_text(p.to_text()) == p


# -- base graph ------------------------------------------------------------------

def test_sample_base_graph_g3_keeps_every_edge():
    p = ConstructionParams(P("1,1"), (P("2"),), 3, 0.04, 4)
    G = sample_uniform_graph(2, 4, 8, random.Random(1))
    assert G.m == 8
    G2, deleted = cut_short_cycles(G, 3)
    assert deleted == [] and G2 == G
    G0, deleted = sample_base_graph(p, random.Random(1))
    assert G0.m == p.m and deleted == []


def test_base_graph_is_deterministic():
    p = params(n=24)
    a = sample_base_graph(p, stage_rng(p.seed, "base"))[0]
    b = sample_base_graph(p, stage_rng(p.seed, "base"))[0]
    assert serialize_graph(a) == serialize_graph(b)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 7))
def test_surgery_reaches_girth(seed, g):
    G = sample_uniform_graph(3, 8, 60, random.Random(seed))
    H, deleted = cut_short_cycles(G, g)
    assert girth(H) >= g
    assert H.m + len(deleted) == G.m
    assert H.edges <= G.edges


def test_uniform_graph_respects_parts():
    G = sample_uniform_graph(3, 5, 40, random.Random(0))
    for u, v in G.edges:
        assert G.part_of[u - 1] != G.part_of[v - 1]


# -- Monte Carlo -------------------------------------------------------------------

def test_mc_cycles_bipartite_triangle_free():
    res = montecarlo_short_cycles(2, 30, 4, 0.04, 5)
    assert res["counts"] == [0] * 5


def test_mc_cycles_g3_empty():
    res = montecarlo_short_cycles(3, 20, 3, 0.04, 3)
    assert res["counts"] == [0, 0, 0] and res["bound_sum"] == 0


def test_check_expansion_complete_bipartite():
    G = complete_bipartite(6, 6)
    res = check_expansion(G, 2, 20, random.Random(0))
    assert res["size"] == 3 and set(res["counts"]) == {9}
    with pytest.raises(ValueError):
        check_expansion(G, 7, 5, random.Random(0))


def test_expansion_mean_near_expectation():
    res = montecarlo_expansion(3, 120, 5, 0.04, 4, trials=20, samples=100, seed=5)
    assert abs(res["mean"] - res["expectation"]) <= 3 * res["stderr"]


# -- split labelling ------------------------------------------------------------------

def test_labelling_r1_is_trivial():
    G0 = sample_uniform_graph(2, 6, 15, random.Random(2))
    label = sample_split_labelling(G0, 1, random.Random(0))
    assert set(label.values()) == {(1, 1)} and len(label) == 15
    gs = gadgets_for((1, 1), 5)
    assert build_graph(G0, label, gs).graph == PartiteGraph(G0.n, G0.edges)


def test_labelling_frequencies():
    G0 = sample_uniform_graph(2, 60, 3000, random.Random(4))
    r = 3
    label = sample_split_labelling(G0, r, random.Random(9))
    counts = {cell: 0 for cell in itertools.product(range(1, r + 1), repeat=2)}
    for cell in label.values():
        counts[cell] += 1
    p = 1 / r ** 2
    sigma = math.sqrt(G0.m * p * (1 - p))
    assert all(abs(c - G0.m * p) <= 4 * sigma for c in counts.values())


def test_labelling_deterministic_and_round_trips():
    G0 = sample_uniform_graph(2, 8, 20, random.Random(4))
    a = sample_split_labelling(G0, 4, stage_rng(1, "label"))
    b = sample_split_labelling(G0, 4, stage_rng(1, "label"))
    assert a == b
    assert parse_labelling(labelling_text(a)) == a
    assert all(G0.part_of[x - 1] < G0.part_of[y - 1] for x, y in a)


def test_bad_pair_r1_means_edgeless():
    G0 = sample_uniform_graph(2, 10, 25, random.Random(6))
    label = sample_split_labelling(G0, 1, random.Random(0))
    res = check_no_bad_pair(G0, label, 5, 1, exhaustive=True)
    edgeless = 0
    for A in itertools.combinations(G0.part(1), 2):
        for B in itertools.combinations(G0.part(2), 2):
            edgeless += not any(G0.has_edge(x, y) for x in A for y in B)
    assert res["bad"] == edgeless and res["probed"] == 45 * 45


def _brute_bad(G0, label, a, r):
    bad = 0
    for A in itertools.combinations(G0.part(1), a):
        for B in itertools.combinations(G0.part(2), a):
            for sel in itertools.product(range(1, r + 1), repeat=2 * a):
                g = dict(zip(A + B, sel))
                hit = any(label.get((x, y)) == (g[x], g[y]) for x in A for y in B)
                bad += not hit
    return bad


def test_bad_pair_exhaustive_tiny_case():
    G0 = PartiteGraph.from_edges(8, [(1, 5), (1, 6), (2, 6), (3, 7), (4, 8), (2, 8)],
                                 [1] * 4 + [2] * 4)
    label = {(1, 5): (1, 2), (1, 6): (2, 2), (2, 6): (1, 1), (3, 7): (2, 1),
             (4, 8): (1, 1), (2, 8): (2, 2)}
    res = check_no_bad_pair(G0, label, 2, 2, exhaustive=True)
    assert res["probed"] == 6 * 6 * 16
    assert res["bad"] == _brute_bad(G0, label, 2, 2)


def test_no_edges_all_bad():
    G0 = PartiteGraph.from_edges(8, [], [1] * 4 + [2] * 4)
    res = check_no_bad_pair(G0, {}, 2, 3, probes=50, rng=random.Random(0))
    assert res["bad"] == res["probed"] == 50


# -- assembled graph ------------------------------------------------------------------

@pytest.mark.parametrize("lam, target, n", [("3,3", "2,2", 9), ("3,1", "2,2", 9),
                                            ("1,1", "2", 12), ("2,1", "3", 10)])
def test_built_graph_structure(lam, target, n):
    for seed in range(3):
        c = construct(params(lam, target, n=n, seed=seed))
        G = c.graph
        gadget_girth = min(girth(J.graph) for J in G.gadgets)
        assert girth(G.graph) >= min(5, gadget_girth)
        for i, p in enumerate(P(lam).parts, 1):
            sub, _ = G.graph.induced(G.part_vertices(i))
            assert degeneracy(sub)[0] <= p - 1
        rep = verify_construction(G, c.assignments[0], 5, P(lam))
        assert rep.structural_ok, rep.to_text()


def test_target_ones_gives_one_shared_list():
    from lamchoose.graph import is_k_colourable
    for seed in range(4):
        c = construct(params("1,1,1", "1,1", n=10, seed=seed))
        L = c.assignments[0]
        assert len(set(L.lists.values())) == 1
        G = c.graph.graph
        assert (l_colour(G, L) is None) == (not is_k_colourable(G, 2)[0])


def test_target_two_family():
    sets, family = adversarial_family(P("2"))
    assert sets == ((1, 2, 3),) and len(family) == 3
    assert params(target="2").t == 12 * params(target="2").r


def test_target_one_two_family():
    sets, family = adversarial_family(P("1,2"))
    assert [len(C) for C in sets] == [3, 1]
    assert len(family) == 3 and all(len(f) == 3 for f in family)


def test_bad_assignment_is_balanced():
    c = construct(params("1,1", "2", n=24, seed=5))
    L = c.assignments[0]
    G = c.graph
    assert validate_assignment(G.graph, L)
    for i in (1, 2):
        use = {}
        for x in G.part_vertices(i):
            use[L.lists[x]] = use.get(L.lists[x], 0) + 1
        assert sorted(use.values()) == [8, 8, 8]
    for v in G.base.vertices():
        assert len({L.lists[x] for x in G.block(v)}) == 1


def test_bad_assignment_blocks_share_lists():
    c = construct(params("3,1", "2,2", n=9, seed=1))
    G, L = c.graph, c.assignments[0]
    assert validate_assignment(G.graph, L)
    for v in G.base.vertices():
        assert len({L.lists[x] for x in G.block(v)}) == 1


def test_verify_reports_colourability_verdict():
    c = construct(params("1,1", "2", n=6, seed=0))
    rep = verify_construction(c.graph, c.assignments[0], 5, P("1,1"), decide_cap=100)
    expected = l_colour(c.graph.graph, c.assignments[0]) is not None
    assert rep.colourable is expected
    assert "l_colourable=" in rep.to_text()


def test_verify_detects_injected_cross_edge():
    c = construct(params("3,1", "2,2", n=9, seed=2))
    G = c.graph
    x, y = next(iter(c.label))
    present = {(a, b) for a in G.block(x) for b in G.block(y) if G.graph.has_edge(a, b)}
    extra = next((a, b) for a in G.block(x) for b in G.block(y) if (a, b) not in present)
    bad_graph = PartiteGraph.from_edges(G.graph.n, set(G.graph.edges) | {extra})
    from dataclasses import replace
    rep = verify_construction(replace(G, graph=bad_graph), c.assignments[0], 5, P("3,1"))
    assert rep.max_block_edges == 2 and rep.worst_block_pair == (x, y)
    assert not rep.structural_ok
    assert "worst_block_pair" in rep.to_text()


def test_construct_is_deterministic():
    a = construct(params("3,1", "2,2", n=9, seed=4))
    b = construct(params("3,1", "2,2", n=9, seed=4))
    assert serialize_graph(a.graph.graph) == serialize_graph(b.graph.graph)
    assert a.assignments[0].to_text() == b.assignments[0].to_text()
    assert labelling_text(a.label) == labelling_text(b.label)


# -- occupancy -----------------------------------------------------------------------

def test_occupancy_below_threshold_is_empty():
    c = construct(params("1,1", "2", n=12, seed=0))
    G, L = c.graph, c.assignments[0]
    phi = l_colour(G.graph, L)
    assert phi is not None
    rep = occupied_groups(G, phi, L, t=10**6)  # threshold ceil(n r / t) = 1
    assert rep.threshold == 1
    rep = occupied_groups(G, phi, L, t=1)  # threshold n r: no colour reaches it twice
    assert rep.threshold == 12
    assert all(not s for s in rep.occupied_sets.values())


def test_occupancy_single_colour():
    from lamchoose.assignments import ListAssignment
    G0 = PartiteGraph.from_edges(3, [], [1, 1, 1])
    G = build_graph(G0, {}, gadgets_for((1,), 5))
    L = ListAssignment({v: frozenset({1}) for v in G.graph.vertices()},
                       (frozenset({1}),), P("1"))
    rep = occupied_groups(G, {v: 1 for v in G.graph.vertices()}, L, t=1)
    assert rep.occupied_sets == {1: frozenset({1})}


def test_shared_occupied_group_forces_bad_pair():
    # if both parts occupy the same group, one colour of that group is heavy
    # on both sides and its vertices form a bad pair
    checked = 0
    for seed in range(8):
        c = construct(params("1,1", "2", n=12, seed=seed))
        G, L = c.graph, c.assignments[0]
        phi = l_colour(G.graph, L)
        if phi is None:
            continue
        rep = occupied_groups(G, phi, L)
        if rep.occupied_sets[1] & rep.occupied_sets[2]:
            res = check_no_bad_pair(G.base, c.label, c.params.t, G.r, exhaustive=True)
            assert res["bad"] > 0
            checked += 1
    assert checked


# -- feasibility -----------------------------------------------------------------------

def test_feasibility_examples():
    conds = {c.name: c for c in feasibility_report(3, 100, 5, 0.04, 4, 1)}
    assert not conds["short_cycles"].holds
    assert conds["labelling"].holds  # r = 1
    g3 = {c.name: c for c in feasibility_report(3, 1, 3, 0.04, 4, 1)}
    assert g3["short_cycles"].holds and g3["short_cycles"].min_n == 1


@pytest.mark.parametrize("r", [2, 5])
def test_feasibility_minimal_n_reverifies(r):
    for c in feasibility_report(3, 200, 5, 0.04, 4, r):
        assert c.min_n is not None
        at = {x.name: x for x in feasibility_report(3, c.min_n, 5, 0.04, 4, r)}[c.name]
        assert at.holds
        if c.min_n > 1:
            below = {x.name: x for x in feasibility_report(3, c.min_n // 2, 5, 0.04, 4, r)}[c.name]
            assert not below.holds
