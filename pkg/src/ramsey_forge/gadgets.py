"""Graph gadgets: transitive-triangle-free digraphs, triangle-free graphs
with bounded independence, exact off-diagonal Ramsey search, the
iterated-Mycielski family, digraph-driven bounded pair instances, and the
preservation budget arithmetic.

Graphs are capped at 64 vertices with word-packed adjacency rows, so
triangle and independence tests are a couple of mask operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .budget import Budget
from .colorings import ApproxFunction, Coloring
from .encoder import encode_stable
from .errors import BudgetExceededError, InputError, PreconditionError

MAX_VERTICES = 64


def _check_order(order: int) -> None:
    if not 0 <= order <= MAX_VERTICES:
        raise InputError(f"vertex count {order} outside [0, {MAX_VERTICES}]")


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Digraph:
    """Directed graph on [0, order) with bitmask successor rows."""

    order: int
    succ: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_order(self.order)
        if len(self.succ) != self.order:
            raise InputError("successor table length must equal the vertex count")
        full = (1 << self.order) - 1
        for u, row in enumerate(self.succ):
            if row & ~full:
                raise InputError(f"edge from {u} leaves the vertex range")
            if row >> u & 1:
                raise InputError(f"self-loop at {u}")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        _check_order(order)
        succ = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise InputError(f"edge ({u}, {v}) outside [0, {order})")
            if u == v:
                raise InputError(f"self-loop at {u}")
            succ[u] |= 1 << v
        return cls(order, tuple(succ))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in _bits(self.succ[u])]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.succ[u] >> v & 1)

    def underlying_adjacency(self) -> tuple[int, ...]:
        adj = list(self.succ)
        for u in range(self.order):
            for v in _bits(self.succ[u]):
                adj[v] |= 1 << u
        return tuple(adj)


@dataclass(frozen=True)
class Graph:
    """Undirected graph on [0, order) with bitmask adjacency rows."""

    order: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_order(self.order)
        if len(self.adj) != self.order:
            raise InputError("adjacency table length must equal the vertex count")
        full = (1 << self.order) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise InputError(f"edge at {u} leaves the vertex range")
            if row >> u & 1:
                raise InputError(f"self-loop at {u}")
            for v in _bits(row):
                if not self.adj[v] >> u & 1:
                    raise InputError(f"asymmetric edge ({u}, {v})")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        _check_order(order)
        adj = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise InputError(f"edge ({u}, {v}) outside [0, {order})")
            if u == v:
                raise InputError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(order, tuple(adj))

    def edges(self) -> list[tuple[int, int]]:
        return [
            (u, v) for u in range(self.order) for v in _bits(self.adj[u]) if u < v
        ]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()


# ---------------------------------------------------------------------------
# Serialization: `v=<n>` header plus one `u v` line per edge, or JSON.


def graph_to_text(g: Graph | Digraph) -> str:
    lines = [f"v={g.order}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def _parse_edge_lines(text: str) -> tuple[int, list[tuple[int, int]]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("v="):
        raise InputError("graph files start with a `v=<n>` line")
    try:
        order = int(lines[0][2:])
    except ValueError:
        raise InputError(f"bad vertex count: {lines[0]!r}") from None
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InputError(f"expected `u v`, got {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise InputError(f"non-integer endpoint: {ln!r}") from None
    return order, edges


def graph_from_text(text: str) -> Graph:
    order, edges = _parse_edge_lines(text)
    return Graph.from_edges(order, edges)


def digraph_from_text(text: str) -> Digraph:
    order, edges = _parse_edge_lines(text)
    return Digraph.from_edges(order, edges)


def graph_to_json_obj(g: Graph | Digraph) -> dict:
    return {
        "v": g.order,
        "directed": isinstance(g, Digraph),
        "edges": [list(e) for e in g.edges()],
    }


def graph_from_json_obj(obj: Mapping) -> Graph:
    try:
        return Graph.from_edges(int(obj["v"]), [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graph JSON: {exc}") from None


def digraph_from_json_obj(obj: Mapping) -> Digraph:
    try:
        return Digraph.from_edges(int(obj["v"]), [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad digraph JSON: {exc}") from None


# ---------------------------------------------------------------------------
# Triangle structure


def find_transitive_triangle(d: Digraph) -> tuple[int, int, int] | None:
    """First triple (u, v, w) with edges u->v, v->w, u->w, scanning u, v, w
    in increasing order; None when the digraph has none."""
    for u in range(d.order):
        row_u = d.succ[u]
        for v in _bits(row_u):
            both = d.succ[v] & row_u
            if both:
                return (u, v, (both & -both).bit_length() - 1)
    return None


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    """Lexicographically first triangle of an undirected graph, if any."""
    for u in range(g.order):
        above_u = g.adj[u] >> (u + 1) << (u + 1)
        for v in _bits(above_u):
            both = g.adj[v] & above_u & ~((1 << (v + 1)) - 1)
            if both:
                return (u, v, (both & -both).bit_length() - 1)
    return None


def max_independent(g: Graph | Digraph) -> tuple[int, ...]:
    """Exact maximum independent set; for digraphs an edge in either
    direction rules a pair out.

    Same branch-and-bound discipline as the other searches: lexicographic
    depth-first, strict improvements only, so ties resolve to the
    lexicographically least maximum.
    """
    adj = g.underlying_adjacency() if isinstance(g, Digraph) else g.adj
    best: tuple[int, ...] = ()

    def grow(chosen: list[int], start: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = tuple(chosen)
        for v in range(start, g.order):
            if len(chosen) + (g.order - v) <= len(best):
                break
            if all(not adj[u] >> v & 1 for u in chosen):
                chosen.append(v)
                grow(chosen, v + 1)
                chosen.pop()

    grow([], 0)
    return best


# ---------------------------------------------------------------------------
# The two hard-wired example digraphs


def paper_digraph_3() -> Digraph:
    """Directed 3-cycle: the smallest digraph with no transitive triangle
    and independence number 1."""
    return Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


def paper_digraph_8() -> Digraph:
    """Eight-vertex gadget: the 8-cycle plus two directed 4-cycles through
    the even and odd vertices; no transitive triangle, independence 2."""
    cycle = [(i, (i + 1) % 8) for i in range(8)]
    evens = [(0, 6), (6, 4), (4, 2), (2, 0)]
    odds = [(7, 5), (5, 3), (3, 1), (1, 7)]
    return Digraph.from_edges(8, cycle + evens + odds)


# ---------------------------------------------------------------------------
# Off-diagonal Ramsey search


def search_triangle_free(
    v: int, indep: int, *, budget: Budget | None = None
) -> Graph | None:
    """Triangle-free graph on v vertices with no independent set of size
    ``indep``, or None when exhaustive search certifies absence.

    Vertices are added one at a time; the new vertex's neighbourhood must
    be an independent set (no new triangle) and must dominate every
    independent (indep-1)-set (no independent indep-set through the new
    vertex).  Both prunings are exact, so a None answer is a certificate.
    Neighbourhoods are tried largest first, which finds dense witnesses
    quickly; the order does not affect certification.
    """
    _check_order(v)
    if indep < 1:
        raise InputError(f"independence bound must be positive, got {indep}")
    if budget is None:
        budget = Budget()

    # ind[j] lists the independent j-subsets of the current graph as masks
    def grow(adj: list[int], ind: list[list[int]]) -> list[int] | None:
        budget.charge()
        t = len(adj)
        if t == v:
            return adj
        blockers = ind[indep - 1] if indep - 1 < len(ind) else []
        candidates = [0] + [m for level in ind[1:] for m in level]
        candidates.sort(key=lambda m: (-m.bit_count(), m))
        bit = 1 << t
        for nbhd in candidates:
            if any(s & nbhd == 0 for s in blockers):
                continue
            new_adj = [row | bit if nbhd >> u & 1 else row for u, row in enumerate(adj)]
            new_adj.append(nbhd)
            new_ind = [level[:] for level in ind]
            while len(new_ind) < indep:
                new_ind.append([])
            for j in range(min(indep - 1, t + 1), 0, -1):
                new_ind[j] += [s | bit for s in new_ind[j - 1] if s & nbhd == 0]
            hit = grow(new_adj, new_ind)
            if hit is not None:
                return hit
        return None

    rows = grow([], [[0]])
    return None if rows is None else Graph(v, tuple(rows))


def orient_acyclically(g: Graph) -> Digraph:
    """Orient every edge from its smaller to its larger endpoint.

    For triangle-free inputs the result has no transitive triangle (any
    one would be an undirected triangle) and the same independence
    number, since digraph independence ignores edge direction.
    """
    tri = find_triangle(g)
    if tri is not None:
        raise PreconditionError(f"graph has triangle {tri}, refusing to orient")
    return Digraph.from_edges(g.order, g.edges())


# ---------------------------------------------------------------------------
# Mycielski family


def mycielskian(g: Graph) -> Graph:
    """Standard Mycielski construction: order doubles plus an apex.

    Preserves triangle-freeness and raises the chromatic number by
    exactly one.
    """
    if 2 * g.order + 1 > MAX_VERTICES:
        raise InputError(
            f"mycielskian of a {g.order}-vertex graph exceeds {MAX_VERTICES} vertices"
        )
    v = g.order
    apex = 2 * v
    edges = list(g.edges())
    for u in range(v):
        edges += [(v + u, w) for w in _bits(g.adj[u])]
        edges.append((apex, v + u))
    return Graph.from_edges(2 * v + 1, edges)


def _colorable(g: Graph, k: int, order: list[int]) -> bool:
    colors = [-1] * g.order

    def assign(i: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        used = max(colors[w] for w in order[:i]) if i else -1
        for c in range(min(k, used + 2)):
            if all(colors[w] != c for w in _bits(g.adj[u])):
                colors[u] = c
                if assign(i + 1):
                    return True
                colors[u] = -1
        return False

    return assign(0)


def chromatic_number(g: Graph, *, budget: Budget | None = None) -> int:
    """Exact chromatic number by incremental k-colorability checks.

    The lower bound is the exact clique number (a maximum independent set
    of the complement); vertices are tried in decreasing-degree order
    with new colors introduced one at a time.
    """
    if g.order > 20:
        raise BudgetExceededError(
            f"exact coloring capped at 20 vertices, got {g.order}"
        )
    if g.order == 0:
        return 0
    full = (1 << g.order) - 1
    complement = Graph(
        g.order, tuple((~row & full & ~(1 << u)) for u, row in enumerate(g.adj))
    )
    clique = len(max_independent(complement))
    order = sorted(range(g.order), key=lambda u: -g.degree(u))
    k = clique
    while True:
        if budget is not None:
            budget.charge()
        if _colorable(g, k, order):
            return k
        k += 1


def gk_family(k: int) -> Graph:
    """Iterated mycielskian of a single edge: triangle-free with chromatic
    number k+1, so never k-colorable."""
    if k < 1:
        raise InputError(f"family index must be positive, got {k}")
    if k > 4:
        raise BudgetExceededError(f"family capped at index 4, got {k}")
    g = Graph.from_edges(2, [(0, 1)])
    for _ in range(k - 1):
        g = mycielskian(g)
    return g


# ---------------------------------------------------------------------------
# Digraph-driven bounded pair instances


@dataclass(frozen=True)
class StagedPairInstance:
    """A bounded pair instance together with its stage-indexed unfolding.

    ``limit`` colors a pair 1 exactly when the limit values of the vertex
    assignment span an edge of the driving digraph; ``staged`` is the
    arity-3 coloring that evaluates the same edge test with the
    assignment as of each stage, so its limit coloring recovers
    ``limit`` past the last mind-change.
    """

    limit: Coloring
    staged: Coloring


def instance_from_digraph(
    d: Digraph, g: ApproxFunction, window: int
) -> StagedPairInstance:
    """Pair instance f(x, y) = 1 iff (g(x), g(y)) is an edge of ``d``.

    Requires a digraph with no transitive triangle; then no triple can be
    color-1 homogeneous, since its three limit values would form exactly
    such a triangle.
    """
    tri = find_transitive_triangle(d)
    if tri is not None:
        raise PreconditionError(f"digraph has transitive triangle {tri}")
    if g.domain < window:
        raise InputError(
            f"vertex assignment covers [0, {g.domain}), need [0, {window})"
        )
    bad = [v for v in g.base if v >= d.order]
    bad += [val for _, _, val in g.schedule if val >= d.order]
    if bad:
        raise InputError(f"assignment values {sorted(set(bad))} are not vertices")
    limit = Coloring.from_function(
        2, 2, window, lambda x, y: 1 if d.has_edge(g.limit(x), g.limit(y)) else 0
    )
    staged = Coloring.from_function(
        3,
        2,
        window,
        lambda x, y, s: 1 if d.has_edge(g.at_stage(x, s), g.at_stage(y, s)) else 0,
    )
    return StagedPairInstance(limit, staged)


def lift_to_triples(pair_schedule: StagedPairInstance | Coloring, bound: int) -> Coloring:
    """Push a staged pair instance up one arity through the encoder.

    The result has no color-1 homogeneous set of size bound+1 and its
    limit coloring agrees with the pair instance past the combined
    stability threshold.
    """
    staged = (
        pair_schedule.staged
        if isinstance(pair_schedule, StagedPairInstance)
        else pair_schedule
    )
    if staged.arity != 3:
        raise InputError("expected a stage-indexed pair coloring (arity 3)")
    return encode_stable(staged, bound)


def preservation_budget(k: int, survivors: int) -> int:
    """How many tracked functions are needed so ``survivors`` of them
    outlast k rounds of halving: 2^k * (survivors - 1) + 1."""
    if survivors < 1:
        raise InputError(f"survivor count must be positive, got {survivors}")
    if k < 0:
        raise InputError(f"round count must be nonnegative, got {k}")
    return (1 << k) * (survivors - 1) + 1
