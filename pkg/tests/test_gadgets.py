"""Digraph gadgets, Ramsey search, Mycielski family, digraph instances."""

import random
from itertools import combinations

import pytest

from genutil import (
    random_approx,
    random_transitive_triangle_free_digraph,
    random_triangle_free_graph,
)
from ramsey_forge import (
    ApproxFunction,
    BudgetExceededError,
    Budget,
    Coloring,
    Digraph,
    Graph,
    InputError,
    PreconditionError,
    chromatic_number,
    find_homogeneous,
    find_transitive_triangle,
    find_triangle,
    gk_family,
    instance_from_digraph,
    is_bounded_instance,
    limit_coloring,
    lift_to_triples,
    max_independent,
    mycielskian,
    orient_acyclically,
    paper_digraph_3,
    paper_digraph_8,
    preservation_budget,
    search_triangle_free,
    stability_threshold,
)
from ramsey_forge.gadgets import (
    digraph_from_json_obj,
    digraph_from_text,
    graph_from_text,
    graph_to_json_obj,
    graph_to_text,
)
from ramsey_forge.oracle import (
    chromatic_number_naive,
    find_transitive_triangle_naive,
    has_triangle_naive,
    max_independent_naive,
    search_triangle_free_naive,
)


def test_graph_validation():
    with pytest.raises(InputError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(InputError):
        Graph.from_edges(3, [(0, 5)])
    with pytest.raises(InputError):
        Digraph.from_edges(70, [])
    g = Graph.from_edges(4, [(0, 1), (1, 0), (2, 3)])
    assert g.edges() == [(0, 1), (2, 3)]


def test_graph_text_round_trip():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    assert graph_from_text(graph_to_text(g)) == g
    d = paper_digraph_8()
    assert digraph_from_text(graph_to_text(d)) == d
    assert digraph_from_json_obj(graph_to_json_obj(d)) == d


def test_transitive_triangle_detection():
    assert find_transitive_triangle(paper_digraph_3()) is None
    chain = Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert find_transitive_triangle(chain) == (0, 1, 2)
    assert find_transitive_triangle(paper_digraph_8()) is None
    assert find_transitive_triangle_naive(paper_digraph_8()) is None


def test_transitive_triangle_matches_naive():
    rng = random.Random(3)
    for _ in range(30):
        order = rng.randint(2, 7)
        edges = [
            (u, v)
            for u in range(order)
            for v in range(order)
            if u != v and rng.random() < 0.4
        ]
        d = Digraph.from_edges(order, edges)
        fast, naive = find_transitive_triangle(d), find_transitive_triangle_naive(d)
        assert (fast is None) == (naive is None)


def test_paper_digraph_independence():
    assert max_independent(paper_digraph_3()) == (0,)
    assert len(max_independent(paper_digraph_8())) == 2
    assert len(max_independent_naive(paper_digraph_8())) == 2
    edgeless = Graph.from_edges(5, [])
    assert max_independent(edgeless) == (0, 1, 2, 3, 4)


def test_max_independent_matches_naive():
    rng = random.Random(5)
    for _ in range(25):
        order = rng.randint(1, 8)
        g = random_triangle_free_graph(rng, order)
        assert max_independent(g) == max_independent_naive(g)


def test_search_r33_boundary():
    g = search_triangle_free(5, 3)
    assert g is not None
    assert find_triangle(g) is None
    assert len(max_independent(g)) < 3
    # the only such graph is the 5-cycle
    assert all(g.degree(u) == 2 for u in range(5))
    assert search_triangle_free(6, 3) is None


def test_search_matches_naive_enumeration():
    for v, indep in [(3, 2), (4, 3), (5, 3), (6, 3), (4, 2), (5, 2)]:
        fast = search_triangle_free(v, indep)
        naive = search_triangle_free_naive(v, indep)
        assert (fast is None) == (naive is None)
        if fast is not None:
            assert find_triangle(fast) is None
            assert len(max_independent(fast)) < indep


def test_search_desk_scale_pattern():
    # two colors at bounds 3 and 4: 2(l-1)+1 vertices avoid independent l-sets
    for indep in (3, 4):
        g = search_triangle_free(2 * (indep - 1) + 1, indep)
        assert g is not None
        assert find_triangle(g) is None
        assert len(max_independent(g)) < indep


def test_search_budget_is_distinct_from_absence():
    with pytest.raises(BudgetExceededError):
        search_triangle_free(9, 4, budget=Budget(limit=5))


def test_orient_acyclically_properties():
    c5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    d = orient_acyclically(c5)
    assert find_transitive_triangle(d) is None
    assert len(max_independent(d)) == len(max_independent(c5))
    assert orient_acyclically(Graph.from_edges(3, [])).edges() == []
    triangle = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(PreconditionError):
        orient_acyclically(triangle)


def test_orientation_composition_invariant():
    rng = random.Random(7)
    done = 0
    for _ in range(40):
        order = rng.randint(3, 10)
        g = random_triangle_free_graph(rng, order)
        indep = len(max_independent(g)) + 1
        d = orient_acyclically(g)
        assert find_transitive_triangle(d) is None
        assert len(max_independent(d)) < indep
        done += 1
    assert done == 40


def test_wagner_style_witness():
    # 8-cycle plus the four main diagonals: triangle-free, independence 3
    edges = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    g = Graph.from_edges(8, edges)
    assert find_triangle(g) is None
    assert not has_triangle_naive(g)
    assert len(max_independent(g)) == 3
    d = orient_acyclically(g)
    assert find_transitive_triangle(d) is None
    assert len(max_independent(d)) == 3


def test_mycielskian_of_single_edge_is_five_cycle():
    k2 = Graph.from_edges(2, [(0, 1)])
    m = mycielskian(k2)
    assert m.order == 5
    assert all(m.degree(u) == 2 for u in range(5))
    assert find_triangle(m) is None
    assert chromatic_number(m) == 3


def test_mycielskian_raises_chromatic_number():
    g = gk_family(2)
    m = mycielskian(g)
    assert m.order == 11
    assert find_triangle(m) is None
    assert chromatic_number(m) == 4


def test_mycielskian_preserves_triangle_freeness():
    rng = random.Random(11)
    for _ in range(10):
        g = random_triangle_free_graph(rng, rng.randint(2, 9))
        assert find_triangle(mycielskian(g)) is None


def test_mycielskian_size_cap():
    with pytest.raises(InputError):
        mycielskian(Graph.from_edges(32, []))


def test_chromatic_number_basics():
    assert chromatic_number(Graph.from_edges(6, [])) == 1
    c7 = Graph.from_edges(7, [(i, (i + 1) % 7) for i in range(7)])
    assert chromatic_number(c7) == 3
    assert chromatic_number_naive(c7) == 3


def test_chromatic_number_matches_naive():
    rng = random.Random(13)
    for _ in range(15):
        order = rng.randint(1, 6)
        edges = [p for p in combinations(range(order), 2) if rng.random() < 0.5]
        g = Graph.from_edges(order, edges)
        assert chromatic_number(g) == chromatic_number_naive(g)


def test_chromatic_number_vertex_cap():
    with pytest.raises(BudgetExceededError):
        chromatic_number(Graph.from_edges(21, []))


def test_gk_family():
    assert gk_family(1).order == 2
    c5 = gk_family(2)
    assert c5.order == 5 and chromatic_number(c5) == 3
    g3 = gk_family(3)
    assert g3.order == 11 and chromatic_number(g3) == 4
    for k in (1, 2, 3, 4):
        assert find_triangle(gk_family(k)) is None
    assert gk_family(4).order == 23
    with pytest.raises(BudgetExceededError):
        gk_family(5)
    with pytest.raises(InputError):
        gk_family(0)


def test_instance_from_three_cycle():
    g = ApproxFunction(3, tuple(i % 3 for i in range(9)))
    inst = instance_from_digraph(paper_digraph_3(), g, 9)
    assert find_homogeneous(inst.limit, 1, 3) is None
    assert is_bounded_instance(inst.limit, 3)


def test_instance_from_edgeless_digraph():
    d = Digraph.from_edges(4, [])
    g = ApproxFunction(4, tuple(i % 4 for i in range(8)))
    inst = instance_from_digraph(d, g, 8)
    assert all(v == 0 for v in inst.limit.table.values())


def test_instance_rejects_transitive_triangles():
    chain = Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    g = ApproxFunction(3, (0, 1, 2, 0))
    with pytest.raises(PreconditionError):
        instance_from_digraph(chain, g, 4)
    # negative control: building the coloring by hand shows the check fail
    bad = Coloring.from_function(
        2, 2, 6, lambda x, y: 1 if chain.has_edge(x % 3, y % 3) else 0
    )
    assert not is_bounded_instance(bad, 3)


def test_instance_zero_blocks_trace_back_to_nonedges():
    rng = random.Random(17)
    d = random_transitive_triangle_free_digraph(rng, 5)
    g = random_approx(rng, 5, 10, 4, 5)
    inst = instance_from_digraph(d, g, 10)
    for size in (2, 3):
        for h in combinations(range(10), size):
            if all(inst.limit.table[p] == 0 for p in combinations(h, 2)):
                for x, y in combinations(h, 2):
                    assert not d.has_edge(g.limit(x), g.limit(y))


def test_staged_instance_limits_to_the_pair_instance():
    rng = random.Random(19)
    d = random_transitive_triangle_free_digraph(rng, 4)
    g = random_approx(rng, 4, 9, 4, 4)
    inst = instance_from_digraph(d, g, 9)
    lim, report = limit_coloring(inst.staged, g.last_change())
    assert report.is_stable
    assert lim == inst.limit.truncate(8)


def test_lift_to_triples_from_three_cycle():
    g = ApproxFunction(3, tuple(i % 3 for i in range(12)), ((2, 0, 1),))
    inst = instance_from_digraph(paper_digraph_3(), g, 12)
    lifted = lift_to_triples(inst, 3)
    assert lifted.arity == 3
    assert find_homogeneous(lifted, 1, 4) is None
    t = max(stability_threshold(lifted), stability_threshold(inst.staged))
    lim, report = limit_coloring(lifted, t)
    assert report.is_stable
    assert lim == inst.limit.truncate(11)


def test_lift_of_zero_schedule_is_zero():
    staged = Coloring.constant(3, 2, 8, 0)
    assert all(v == 0 for v in lift_to_triples(staged, 3).table.values())


def test_preservation_budget_values():
    assert preservation_budget(0, 5) == 5
    assert preservation_budget(3, 2) == 9
    with pytest.raises(InputError):
        preservation_budget(2, 0)
    with pytest.raises(InputError):
        preservation_budget(-1, 2)


def test_preservation_budget_matches_halving_ladder():
    for k in range(11):
        for survivors in range(1, 11):
            ladder = survivors
            for _ in range(k):
                ladder = 2 * (ladder - 1) + 1
            assert preservation_budget(k, survivors) == ladder
