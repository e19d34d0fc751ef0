"""Transitive-subtournament machinery and the two-step pipeline that turns a
bounded pair instance into a large color-0 homogeneous set.

A set H is transitive for a pair 2-coloring when f(x,y) = f(y,z) forces
f(x,z) = f(x,y) for all x < y < z in H; this is the tournament view in
which a pair colored 1 is a forward edge.  On a transitive set, color-1
chains behave like paths in a transitive tournament, which is what makes
the longest-chain ranks below well defined via dynamic programming.
"""

from __future__ import annotations

import math
from typing import Iterable

from .colorings import Coloring, FiniteSet, canon_set, find_homogeneous, is_bounded_instance
from .errors import BoundViolationError, InputError, PreconditionError


def _check_pair(c: Coloring) -> None:
    if c.arity != 2 or c.colors != 2:
        raise InputError("expected a 2-coloring of pairs")


def is_transitive(c: Coloring, elems: Iterable[int]) -> bool:
    _check_pair(c)
    h = canon_set(elems)
    if h and h[-1] >= c.window:
        raise InputError(f"{h[-1]} lies outside window [0, {c.window})")
    t = c.table
    for i in range(len(h)):
        for j in range(i + 1, len(h)):
            for k in range(j + 1, len(h)):
                x, y, z = h[i], h[j], h[k]
                if t[(x, y)] == t[(y, z)] != t[(x, z)]:
                    return False
    return True


def _extends_transitive(table: dict, chain: list[int], z: int) -> bool:
    # only triples involving z can break transitivity of chain + {z}
    for i, x in enumerate(chain):
        for y in chain[i + 1 :]:
            if table[(x, y)] == table[(y, z)] != table[(x, z)]:
                return False
    return True


def max_transitive_subset(c: Coloring) -> FiniteSet:
    """Maximum-cardinality transitive subset of the window, exact.

    Depth-first branch and bound over subsets in lexicographic order with
    only strict improvements recorded, so the result is the
    lexicographically least among the maximum-size transitive sets.
    """
    _check_pair(c)
    table = c.table
    best: tuple[int, ...] = ()

    def grow(chain: list[int], start: int) -> None:
        nonlocal best
        if len(chain) > len(best):
            best = tuple(chain)
        for z in range(start, c.window):
            if len(chain) + (c.window - z) <= len(best):
                break
            if _extends_transitive(table, chain, z):
                chain.append(z)
                grow(chain, z + 1)
                chain.pop()

    grow([], 0)
    return best


def rt1_to_em(g: Coloring, window: int) -> Coloring:
    """Pair coloring f(x, y) = 1 exactly when g gives x and y different colors.

    Any f-transitive set is then nearly g-monochromatic: at most one
    adjacent pair of its elements can change g-value, since two changes
    x, y, z would give f(x,y) = f(y,z) = 1 with f(x,z) = 0.
    """
    if g.arity != 1:
        raise InputError("expected a 1-ary coloring")
    if window > g.window:
        raise InputError(f"window {window} exceeds the coloring's [0, {g.window})")
    return Coloring.from_function(
        2, 2, window, lambda x, y: 1 if g.table[(x,)] != g.table[(y,)] else 0
    )


def chain_rank(c: Coloring, elems: Iterable[int], bound: int) -> dict[int, int]:
    """Longest color-1 chain length (minus one) ending at each element of a
    transitive set.

    Computed by dynamic programming in increasing order; transitivity
    guarantees that extending the maximal chain ending at a by an edge
    (a, b) of color 1 keeps the whole chain pairwise color 1, so the DP
    value equals the length of the longest color-1 homogeneous subset
    ending at each point.  All ranks must stay below ``bound``; a chain
    of length ``bound`` means the caller's promise was broken.
    """
    _check_pair(c)
    s = canon_set(elems)
    if s and s[-1] >= c.window:
        raise InputError(f"{s[-1]} lies outside window [0, {c.window})")
    if not is_transitive(c, s):
        raise PreconditionError("chain ranks need a transitive base set")
    table = c.table
    rank: dict[int, int] = {}
    pred: dict[int, int | None] = {}
    for b in s:
        rank[b] = 0
        pred[b] = None
        for a in s:
            if a >= b:
                break
            if table[(a, b)] == 1 and rank[a] + 1 > rank[b]:
                rank[b] = rank[a] + 1
                pred[b] = a
        if rank[b] >= bound:
            chain = [b]
            while pred[chain[-1]] is not None:
                chain.append(pred[chain[-1]])
            raise BoundViolationError(
                f"color-1 chain {tuple(reversed(chain))} has {len(chain)} elements, "
                f"bound promised {bound}"
            )
    return rank


def brt22_solve(c: Coloring, bound: int) -> FiniteSet:
    """Color-0 homogeneous set extracted from a bounded pair instance.

    Pipeline: take the maximum transitive subset S, rank its elements by
    longest color-1 chains, and keep the largest rank class (ties to the
    smallest rank).  Two elements of one class can never be joined by
    color 1 (that would bump the later element's rank), so the class is
    homogeneous for color 0, and since ranks stay below ``bound`` it has
    at least ceil(|S| / bound) elements.
    """
    _check_pair(c)
    witness = find_homogeneous(c, 1, bound)
    if witness is not None:
        raise PreconditionError(
            f"not a bounded instance: {witness} is color-1 homogeneous of size {bound}"
        )
    s = max_transitive_subset(c)
    ranks = chain_rank(c, s, bound)
    classes: dict[int, list[int]] = {}
    for a in s:
        classes.setdefault(ranks[a], []).append(a)
    r = max(classes, key=lambda r: (len(classes[r]), -r))
    h = tuple(classes[r])
    assert len(h) >= math.ceil(len(s) / bound)
    return h
