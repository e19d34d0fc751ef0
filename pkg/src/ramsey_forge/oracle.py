"""Naive reference implementations used to cross-check the fast paths.

Everything here scans the full search space with no pruning, so it is
slow and obviously correct.  Tests compare these answers against the
main implementations; the CLI exposes them under ``oracle`` so any
result can be re-derived from the shell.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable

from .colorings import Coloring, FiniteSet, canon_set
from .errors import InputError, WindowTooSmallError
from .gadgets import Digraph, Graph


def find_homogeneous_naive(c: Coloring, color: int, size: int) -> FiniteSet | None:
    """Scan every size-subset of the window in lexicographic order."""
    if not 0 <= color < c.colors:
        raise InputError(f"color {color} out of range [0, {c.colors})")
    if size < c.arity:
        raise InputError(f"size {size} below arity {c.arity}")
    if size > c.window:
        raise WindowTooSmallError(
            f"cannot search for a set of size {size} in window [0, {c.window})"
        )
    for h in combinations(range(c.window), size):
        if all(c.table[t] == color for t in combinations(h, c.arity)):
            return h
    return None


def is_transitive_naive(c: Coloring, elems: Iterable[int]) -> bool:
    h = canon_set(elems)
    for x, y, z in combinations(h, 3):
        if c.table[(x, y)] == c.table[(y, z)] and c.table[(x, z)] != c.table[(x, y)]:
            return False
    return True


def max_transitive_naive(c: Coloring) -> FiniteSet:
    """Scan sizes from the window down; within a size, lexicographic."""
    for size in range(c.window, 0, -1):
        for h in combinations(range(c.window), size):
            if is_transitive_naive(c, h):
                return h
    return ()


def chain_rank_naive(c: Coloring, elems: Iterable[int]) -> dict[int, int]:
    """Longest color-1 homogeneous subset ending at each element, by
    enumerating every subset."""
    s = canon_set(elems)
    rank = {a: 0 for a in s}
    for size in range(1, len(s) + 1):
        for chain in combinations(s, size):
            if all(c.table[p] == 1 for p in combinations(chain, 2)):
                a = chain[-1]
                rank[a] = max(rank[a], size - 1)
    return rank


def max_independent_naive(g: Graph | Digraph) -> FiniteSet:
    adj = g.underlying_adjacency() if isinstance(g, Digraph) else g.adj
    for size in range(g.order, 0, -1):
        for h in combinations(range(g.order), size):
            if all(not adj[u] >> v & 1 for u, v in combinations(h, 2)):
                return h
    return ()


def find_transitive_triangle_naive(d: Digraph) -> tuple[int, int, int] | None:
    for u, v, w in product(range(d.order), repeat=3):
        if d.has_edge(u, v) and d.has_edge(v, w) and d.has_edge(u, w):
            return (u, v, w)
    return None


def has_triangle_naive(g: Graph) -> bool:
    return any(
        g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
        for a, b, c in combinations(range(g.order), 3)
    )


def chromatic_number_naive(g: Graph) -> int:
    """Try every assignment of every color count; tiny graphs only."""
    if g.order == 0:
        return 0
    edges = g.edges()
    for k in range(1, g.order + 1):
        for assign in product(range(k), repeat=g.order):
            if all(assign[u] != assign[v] for u, v in edges):
                return k
    raise AssertionError("order colors always suffice")


def search_triangle_free_naive(v: int, indep: int) -> Graph | None:
    """Enumerate all 2^C(v,2) graphs; practical only for v <= 6."""
    pairs = list(combinations(range(v), 2))
    for picks in product((0, 1), repeat=len(pairs)):
        edges = [p for p, bit in zip(pairs, picks) if bit]
        g = Graph.from_edges(v, edges)
        if has_triangle_naive(g):
            continue
        if len(max_independent_naive(g)) < indep:
            return g
    return None
