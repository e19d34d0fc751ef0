"""Transitive subsets, chain ranks, and the bounded-instance pipeline."""

import math
import random
from itertools import combinations

import pytest

from genutil import random_bounded_instance, random_coloring
from ramsey_forge import (
    BoundViolationError,
    Coloring,
    PreconditionError,
    brt22_solve,
    chain_rank,
    is_transitive,
    max_transitive_subset,
    rt1_to_em,
)
from ramsey_forge.oracle import (
    chain_rank_naive,
    is_transitive_naive,
    max_transitive_naive,
)


def test_small_sets_are_transitive():
    rng = random.Random(3)
    c = random_coloring(rng, 2, 2, 6)
    assert is_transitive(c, ())
    assert is_transitive(c, (2,))
    assert is_transitive(c, (1, 4))


def test_alternating_values_break_transitivity():
    g = Coloring.from_function(1, 2, 3, lambda x: (0, 1, 0)[x])
    f = rt1_to_em(g, 3)
    # f(0,1) = f(1,2) = 1 but f(0,2) = 0
    assert not is_transitive(f, (0, 1, 2))


def test_constant_coloring_is_transitive_everywhere():
    c = Coloring.constant(2, 2, 7, 1)
    assert is_transitive(c, tuple(range(7)))
    assert max_transitive_subset(c) == tuple(range(7))


def test_max_transitive_alternating_example():
    g = Coloring.from_function(1, 2, 8, lambda x: x % 2)
    f = rt1_to_em(g, 8)
    s = max_transitive_subset(f)
    assert len(s) >= 5
    assert s == max_transitive_naive(f)


def test_max_transitive_matches_naive():
    rng = random.Random(5)
    for _ in range(25):
        window = rng.randint(2, 9)
        c = random_coloring(rng, 2, 2, window)
        s = max_transitive_subset(c)
        assert is_transitive(c, s)
        assert s == max_transitive_naive(c)


def test_rt1_to_em_edge_set():
    g = Coloring.from_function(1, 2, 4, lambda x: (0, 1, 1, 0)[x])
    f = rt1_to_em(g, 4)
    ones = {t for t, v in f.table.items() if v == 1}
    assert ones == {(0, 1), (0, 2), (1, 3), (2, 3)}
    const = rt1_to_em(Coloring.constant(1, 2, 5, 1), 5)
    assert all(v == 0 for v in const.table.values())


def test_rt1_transitive_sets_nearly_monochromatic():
    # small-window version of the exhaustive acceptance sweep; pair
    # colorings need at least two points
    for n in range(2, 7):
        for mask in range(1 << n):
            g = Coloring.from_function(1, 2, n, lambda x: mask >> x & 1)
            f = rt1_to_em(g, n)
            for size in range(1, n + 1):
                for h in combinations(range(n), size):
                    if not is_transitive_naive(f, h):
                        continue
                    changes = sum(
                        1
                        for a, b in zip(h, h[1:])
                        if g.table[(a,)] != g.table[(b,)]
                    )
                    assert changes <= 1


def test_chain_rank_zero_coloring():
    c = Coloring.constant(2, 2, 6, 0)
    assert chain_rank(c, (0, 2, 4), 3) == {0: 0, 2: 0, 4: 0}


def test_chain_rank_single_edge():
    c = Coloring.from_function(2, 2, 4, lambda x, y: 1 if (x, y) == (0, 1) else 0)
    assert chain_rank(c, (0, 1, 2, 3), 3) == {0: 0, 1: 1, 2: 0, 3: 0}


def test_chain_rank_matches_all_chains_enumeration():
    rng = random.Random(9)
    for _ in range(40):
        window = rng.randint(2, 10)
        c = random_coloring(rng, 2, 2, window)
        s = max_transitive_subset(c)
        ranks = chain_rank(c, s, window + 1)
        assert ranks == chain_rank_naive(c, s)


def test_chain_rank_edge_forces_increase():
    rng = random.Random(13)
    for _ in range(30):
        window = rng.randint(2, 9)
        c = random_coloring(rng, 2, 2, window)
        s = max_transitive_subset(c)
        ranks = chain_rank(c, s, window + 1)
        for a, b in combinations(s, 2):
            if c.table[(a, b)] == 1:
                assert ranks[b] >= ranks[a] + 1


def test_chain_rank_bound_violation():
    c = Coloring.constant(2, 2, 4, 1)
    with pytest.raises(BoundViolationError):
        chain_rank(c, (0, 1, 2), 2)


def test_chain_rank_requires_transitive_base():
    g = Coloring.from_function(1, 2, 3, lambda x: (0, 1, 0)[x])
    f = rt1_to_em(g, 3)
    with pytest.raises(PreconditionError):
        chain_rank(f, (0, 1, 2), 5)


def test_rank_classes_are_color0_homogeneous():
    rng = random.Random(17)
    for _ in range(30):
        window = rng.randint(3, 8)
        c = random_coloring(rng, 2, 2, window)
        s = max_transitive_subset(c)
        ranks = chain_rank(c, s, window + 1)
        for r in set(ranks.values()):
            cls = [a for a in s if ranks[a] == r]
            for a, b in combinations(cls, 2):
                assert c.table[(a, b)] == 0


def test_brt22_solve_trivial():
    c = Coloring.constant(2, 2, 10, 0)
    assert brt22_solve(c, 2) == tuple(range(10))


def test_brt22_solve_random_instances():
    rng = random.Random(21)
    for _ in range(25):
        window = rng.randint(4, 10)
        bound = rng.choice([2, 3])
        c = random_bounded_instance(rng, window, bound)
        h = brt22_solve(c, bound)
        for p in combinations(h, 2):
            assert c.table[p] == 0
        s = max_transitive_subset(c)
        assert len(h) >= math.ceil(len(s) / bound)


def test_brt22_solve_rejects_invalid_instances():
    c = Coloring.constant(2, 2, 5, 1)
    with pytest.raises(PreconditionError, match="color-1 homogeneous"):
        brt22_solve(c, 3)
