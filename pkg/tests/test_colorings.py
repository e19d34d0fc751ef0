"""Core coloring type, homogeneous search, limit colorings, ranks."""

import random

import pytest

from genutil import random_coloring
from ramsey_forge import (
    ApproxFunction,
    Coloring,
    InputError,
    OrdinalCNF,
    WindowTooSmallError,
    canon_set,
    embed_constant_tail,
    find_homogeneous,
    is_bounded_instance,
    limit_coloring,
    natural_sum,
    rank_of,
    stability_threshold,
)
from ramsey_forge.colorings import StabilityReport
from ramsey_forge.oracle import find_homogeneous_naive


def test_coloring_requires_totality():
    table = {(0, 1): 0, (0, 2): 0}
    with pytest.raises(InputError, match="not total"):
        Coloring(2, 2, 3, table)


def test_coloring_rejects_bad_parameters():
    with pytest.raises(InputError):
        Coloring.constant(0, 2, 3, 0)
    with pytest.raises(InputError):
        Coloring.constant(2, 1, 3, 0)
    with pytest.raises(InputError):
        Coloring.constant(3, 2, 2, 0)
    with pytest.raises(InputError):
        Coloring(1, 2, 2, {(0,): 0, (1,): 5})


def test_value_sorts_its_argument():
    c = Coloring.from_function(2, 2, 4, lambda x, y: 1 if x == 0 else 0)
    assert c.value((2, 0)) == 1
    with pytest.raises(InputError):
        c.value((1, 1))
    with pytest.raises(InputError):
        c.value((0, 9))


def test_canon_set_validates():
    assert canon_set([3, 1, 2]) == (1, 2, 3)
    with pytest.raises(InputError):
        canon_set([1, 1])
    with pytest.raises(InputError):
        canon_set([-1])


def test_text_round_trip():
    rng = random.Random(7)
    c = random_coloring(rng, 2, 3, 5)
    assert Coloring.from_text(c.to_text()) == c
    assert Coloring.loads(c.to_text()) == c


def test_json_round_trip():
    rng = random.Random(8)
    c = random_coloring(rng, 3, 2, 6)
    import json

    assert Coloring.loads(json.dumps(c.to_json_obj())) == c


def test_text_missing_tuple_is_error():
    text = "coloring d=2 k=2 n=3\n0 1 0\n0 2 1\n"
    with pytest.raises(InputError, match="not total"):
        Coloring.from_text(text)


# -- find_homogeneous -------------------------------------------------------


def test_homog_constant_full_window():
    c = Coloring.constant(2, 2, 6, 0)
    assert find_homogeneous(c, 0, 6) == (0, 1, 2, 3, 4, 5)


def test_homog_unused_color_absent():
    c = Coloring.constant(2, 2, 6, 0)
    assert find_homogeneous(c, 1, 2) is None


def test_homog_star_coloring_has_no_triple():
    # pairs touching 0 are colored 1; no color-1 triple since (x, y) with
    # 0 < x < y is colored 0 -- cross-checked against the naive scan
    c = Coloring.from_function(2, 2, 5, lambda x, y: 1 if x == 0 else 0)
    assert find_homogeneous(c, 1, 3) is None
    assert find_homogeneous_naive(c, 1, 3) is None
    assert find_homogeneous(c, 1, 2) == (0, 1) == find_homogeneous_naive(c, 1, 2)


def test_homog_window_too_small_is_distinct():
    c = Coloring.constant(2, 2, 4, 0)
    with pytest.raises(WindowTooSmallError):
        find_homogeneous(c, 0, 5)
    assert find_homogeneous(c, 1, 4) is None


def test_homog_size_below_arity_rejected():
    c = Coloring.constant(2, 2, 4, 0)
    with pytest.raises(InputError):
        find_homogeneous(c, 0, 1)


def test_homog_agrees_with_naive_scan():
    rng = random.Random(11)
    for _ in range(60):
        arity = rng.choice([1, 2, 3])
        window = rng.randint(arity, 9)
        c = random_coloring(rng, arity, rng.choice([2, 3]), window)
        color = rng.randrange(c.colors)
        size = rng.randint(arity, window)
        assert find_homogeneous(c, color, size) == find_homogeneous_naive(
            c, color, size
        )


def test_is_bounded_instance_examples():
    assert is_bounded_instance(Coloring.constant(2, 2, 6, 0), 2)
    assert not is_bounded_instance(Coloring.constant(2, 2, 3, 1), 3)
    with pytest.raises(InputError):
        is_bounded_instance(Coloring.constant(2, 3, 6, 0), 2)


# -- limit colorings --------------------------------------------------------


def test_limit_of_constant_is_stable():
    f = Coloring.constant(2, 2, 8, 0)
    g, report = limit_coloring(f, 0)
    assert g == Coloring.constant(1, 2, 7, 0)
    assert report.is_stable


def test_limit_of_parity_flags_everything():
    f = Coloring.from_function(2, 2, 8, lambda x, y: y % 2)
    g, report = limit_coloring(f, 0)
    # every tuple with at least two tail samples flips; the window-edge
    # tuple (6,) sees the single value at y=7 and cannot show instability
    assert set(report.unstable) == {(x,) for x in range(6)}
    # value taken at the largest stage
    assert g.table[(0,)] == 7 % 2


def test_limit_threshold_hides_early_noise():
    f = Coloring.from_function(2, 2, 8, lambda x, y: 1 if y < 4 else 0)
    _, early = limit_coloring(f, 0)
    assert early.unstable
    g, late = limit_coloring(f, 4)
    assert late.is_stable
    assert all(v == 0 for v in g.table.values())


def test_limit_threshold_must_be_inside_window():
    f = Coloring.constant(2, 2, 5, 0)
    with pytest.raises(InputError):
        limit_coloring(f, 5)


def test_embed_constant_tail_round_trips_exactly():
    rng = random.Random(13)
    for _ in range(20):
        arity = rng.choice([1, 2])
        g = random_coloring(rng, arity, rng.choice([2, 3]), rng.randint(arity, 7))
        back, report = limit_coloring(embed_constant_tail(g), 0)
        assert back == g
        assert report.is_stable


def test_stability_threshold_reads_last_flip():
    f = Coloring.from_function(2, 2, 10, lambda x, y: 1 if y < 6 else 0)
    assert stability_threshold(f) == 6
    assert stability_threshold(Coloring.constant(2, 2, 10, 1)) == 0


def test_restrict_reindexes():
    c = Coloring.from_function(2, 2, 8, lambda x, y: 1 if x == 2 else 0)
    r = c.restrict((2, 5, 7))
    assert r.window == 3
    assert r.table[(0, 1)] == 1 and r.table[(0, 2)] == 1 and r.table[(1, 2)] == 0


def test_truncate():
    c = Coloring.constant(2, 2, 6, 1)
    assert c.truncate(4) == Coloring.constant(2, 2, 4, 1)
    with pytest.raises(InputError):
        c.truncate(7)


# -- ordinal ranks ----------------------------------------------------------


def test_rank_of_constant_zero_uses_singleton_floor():
    # singletons are vacuously color-1 homogeneous, so nonempty sets rank
    # at least omega; the empty set ranks omega^0 = 1
    c = Coloring.constant(2, 2, 6, 0)
    assert rank_of(c, (0, 3, 5)) == OrdinalCNF.omega_power(1)
    assert rank_of(c, ()) == OrdinalCNF.omega_power(0) == OrdinalCNF((1,))


def test_rank_of_star_coloring():
    c = Coloring.from_function(2, 2, 5, lambda x, y: 1 if x == 0 else 0)
    assert rank_of(c, (0, 1, 2)) == OrdinalCNF.omega_power(2)


def test_rank_exhaustive_cross_check():
    from itertools import combinations

    rng = random.Random(17)
    for _ in range(25):
        window = rng.randint(2, 7)
        c = random_coloring(rng, 2, 2, window)
        xs = tuple(
            sorted(rng.sample(range(window), rng.randint(0, window)))
        )
        best = 1 if xs else 0
        for size in range(2, len(xs) + 1):
            for sub in combinations(xs, size):
                if all(c.table[p] == 1 for p in combinations(sub, 2)):
                    best = max(best, size)
        assert rank_of(c, xs) == OrdinalCNF.omega_power(best)


def test_rank_antitone_under_subset():
    rng = random.Random(19)
    for _ in range(25):
        window = rng.randint(2, 8)
        c = random_coloring(rng, 2, 2, window)
        big = sorted(rng.sample(range(window), rng.randint(1, window)))
        small = sorted(rng.sample(big, rng.randint(0, len(big))))
        assert rank_of(c, small) <= rank_of(c, big)


# -- natural sums -----------------------------------------------------------


def test_natural_sum_examples():
    w2_plus_w = OrdinalCNF((0, 1, 1))
    w = OrdinalCNF((0, 1))
    assert natural_sum(w2_plus_w, w) == OrdinalCNF((0, 2, 1))
    alpha = OrdinalCNF((4, 0, 2))
    assert natural_sum(OrdinalCNF.zero(), alpha) == alpha
    w3 = OrdinalCNF.omega_power(3)
    assert natural_sum(w3, w3) == OrdinalCNF((0, 0, 0, 2))


def test_natural_sum_properties():
    rng = random.Random(23)

    def rand_ord():
        return OrdinalCNF.from_coeffs(rng.randrange(4) for _ in range(rng.randint(0, 4)))

    for _ in range(200):
        a, b, c = rand_ord(), rand_ord(), rand_ord()
        assert natural_sum(a, b) == natural_sum(b, a)
        assert natural_sum(natural_sum(a, b), c) == natural_sum(a, natural_sum(b, c))
        if b < c:
            assert natural_sum(a, b) < natural_sum(a, c)


def test_ordinal_order_and_invariants():
    assert OrdinalCNF(()) < OrdinalCNF((1,)) < OrdinalCNF((0, 1)) < OrdinalCNF((1, 1))
    assert OrdinalCNF((0, 1)) < OrdinalCNF((0, 0, 1))
    with pytest.raises(InputError):
        OrdinalCNF((1, 0))
    with pytest.raises(InputError):
        OrdinalCNF((-1,))
    assert str(OrdinalCNF((4, 1, 3))) == "w^2*3 + w + 4"


# -- approx functions -------------------------------------------------------


def test_approx_function_stages():
    g = ApproxFunction(2, (0, 1, 0), ((3, 0, 1), (5, 0, 0)))
    assert [g.at_stage(0, s) for s in (0, 2, 3, 4, 5, 9)] == [0, 0, 1, 1, 0, 0]
    assert g.limit(0) == 0 and g.limit(1) == 1
    assert g.last_change() == 5


def test_approx_function_validation():
    with pytest.raises(InputError):
        ApproxFunction(2, (0, 2))
    with pytest.raises(InputError):
        ApproxFunction(2, (0, 1), ((3, 0, 1), (3, 0, 0)))
    with pytest.raises(InputError):
        ApproxFunction(2, (0, 1), ((1, 5, 0),))


def test_approx_json_round_trip():
    g = ApproxFunction(3, (0, 2, 1), ((2, 1, 0),))
    assert ApproxFunction.from_json_obj(g.to_json_obj()) == g


def test_stability_report_is_stable():
    assert StabilityReport(0, (), ()).is_stable
    assert not StabilityReport(0, ((0,),), ()).is_stable
