"""Coloring transformations: the stage-by-stage bounded-instance encoder,
tail-set families for stabilization, and mind-change plumbing.

The encoder rewrites an arity-(n+1) coloring so that color 1 can never
accumulate a homogeneous set of more than ``bound`` elements, while
preserving the limit behaviour of stable inputs whose limit already
respects the bound.  Within each stage the n-tuples are scanned in
colexicographic order; colex is the fixed enumeration of n-tuples of
order type omega used everywhere in this module.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .colorings import ApproxFunction, Coloring, FiniteSet, canon_set
from .errors import InputError


def colex_tuples(upper: int, n: int) -> list[tuple[int, ...]]:
    """All strictly increasing n-tuples over [0, upper) in colex order."""
    return sorted(combinations(range(upper), n), key=lambda t: t[::-1])


def encode_stable(h: Coloring, bound: int) -> Coloring:
    """Re-color h stage by stage so color 1 never exceeds ``bound`` elements.

    At stage s each n-tuple xs over [0, s) is scanned in colex order and
    receives 1 only when h gives it 1 and no blocking set exists: a set F
    of ``bound`` elements whose colex-largest n-subset is xs and whose
    every other n-subset already received 1 at this stage.  The output
    has no color-1 homogeneous set of size bound+1, and when h is stable
    with a limit that has no color-1 homogeneous set of size ``bound``,
    the limit passes through unchanged past a threshold reported by
    ``colorings.stability_threshold``.
    """
    if h.colors != 2:
        raise InputError("the encoder expects a 2-coloring")
    if h.arity < 2:
        raise InputError("the encoder expects arity at least 2")
    if bound < 1:
        raise InputError(f"bound must be positive, got {bound}")
    n = h.arity - 1
    extra = bound - n
    table: dict[tuple[int, ...], int] = {}
    for s in range(h.window):
        stage: dict[tuple[int, ...], int] = {}
        for xs in colex_tuples(s, n):
            v = 0
            if h.table[xs + (s,)] == 1 and not _blocked(xs, stage, extra, n):
                v = 1
            stage[xs] = v
            table[xs + (s,)] = v
    return Coloring(h.arity, 2, h.window, table)


def _blocked(xs: tuple[int, ...], stage: dict[tuple[int, ...], int], extra: int, n: int) -> bool:
    # Blocking sets F have their top n elements equal to xs, so they are
    # xs plus `extra` elements below min(xs).
    if extra < 0:
        return False
    for low in combinations(range(xs[0]), extra):
        f = low + xs
        if all(stage[z] == 1 for z in combinations(f, n) if z != xs):
            return True
    return False


def coh_family(f: Coloring) -> dict[tuple[tuple[int, ...], int], FiniteSet]:
    """Tail sets R[xs, i] = { y > max(xs) : f(xs, y) = i } within the window.

    For every prefix tuple these sets partition the tail (max(xs), window),
    which is what makes them usable for stabilizing f on a set that is
    almost-inside or almost-outside each of them.
    """
    if f.arity < 2:
        raise InputError("tail families need arity at least 2")
    out: dict[tuple[tuple[int, ...], int], FiniteSet] = {}
    for xs in combinations(range(f.window), f.arity - 1):
        buckets: dict[int, list[int]] = {i: [] for i in range(f.colors)}
        for y in range(xs[-1] + 1, f.window):
            buckets[f.table[xs + (y,)]].append(y)
        for i in range(f.colors):
            out[(xs, i)] = tuple(buckets[i])
    return out


def check_quasi_cohesive(c: Iterable[int], r: Iterable[int], slack: int) -> bool:
    """True when all but at most ``slack`` elements of c lie in r, or all but
    at most ``slack`` lie outside r."""
    cs = set(canon_set(c))
    inside = len(cs & set(r))
    return len(cs) - inside <= slack or inside <= slack


def approx_to_stable_pairs(g: ApproxFunction, window: int) -> Coloring:
    """Spread a mind-change schedule into a stable pair coloring.

    f(x, s) is g's value at x as of stage s, so the limit coloring of f
    past the last mind-change is exactly the limit of g.
    """
    if g.domain < window - 1:
        raise InputError(
            f"approx function covers [0, {g.domain}), need [0, {window - 1})"
        )
    last = g.last_change()
    if last >= window:
        raise InputError(f"mind-change at stage {last} outside window [0, {window})")
    return Coloring.from_function(2, g.colors, window, lambda x, s: g.at_stage(x, s))
