"""Desk-scale simulator of the diagonalization construction: block-encoded
colorings, partition conditions, the finitely branching question tree over
table-driven enumeration machines, witness-graph growth, path tracing, and
color merging.

Everything infinite in the construction is replaced by a finite window:
reservoirs are finite sorted tuples, machines are finite lookup tables,
and "infinitely many" becomes "the most surviving reservoir elements,
ties to the least color".  Each operation reports what the window could
not certify rather than silently pretending.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .colorings import Coloring, FiniteSet, canon_set
from .errors import CapExceededError, FrontierError, InputError, PreconditionError
from .gadgets import Graph, gk_family

# ---------------------------------------------------------------------------
# Block encoding of sets as k-valued functions


def fblock_encode_raw(xs: Sequence[int], k: int, n: int) -> tuple[int, ...]:
    if k < 2:
        raise InputError(f"block encoding needs k >= 2, got {k}")
    out = []
    elems = set(xs)
    for m in range(n):
        hit = next((i for i in range(k - 1) if m * k + i in elems), None)
        out.append(0 if hit is None else hit + 1)
    return tuple(out)


def fblock_decode_raw(values: Sequence[int], k: int) -> FiniteSet:
    if k < 2:
        raise InputError(f"block encoding needs k >= 2, got {k}")
    out = []
    for m, v in enumerate(values):
        if not 0 <= v < k:
            raise InputError(f"value {v} at {m} outside [0, {k})")
        if v > 0:
            out.append(m * k + (v - 1))
    return tuple(out)


def fblock_encode(xs: Iterable[int], k: int, n: int) -> Coloring:
    """1-ary coloring reading off which slot of each k-block ``xs`` hits.

    Block m spans [m*k, m*k + k - 2]; a miss encodes as 0 and the least
    hit at offset i as i+1.  The top element of each block is invisible
    to the encoding.
    """
    values = fblock_encode_raw(canon_set(xs), k, n)
    return Coloring(1, k, n, {(m,): v for m, v in enumerate(values)})


def fblock_decode(f: Coloring, k: int) -> FiniteSet:
    """Canonical set whose block encoding reproduces ``f`` exactly."""
    if f.arity != 1:
        raise InputError("block decoding expects a 1-ary coloring")
    if f.colors != k:
        raise InputError(f"coloring has {f.colors} colors, expected {k}")
    return fblock_decode_raw([f.table[(m,)] for m in range(f.window)], k)


# ---------------------------------------------------------------------------
# Partition conditions


@dataclass(frozen=True)
class FCondition:
    """k disjoint finished blocks plus a reservoir strictly above them.

    Structural invariants only; whether a given pair coloring actually
    sorts the blocks against the reservoir is ``validate_condition``.
    """

    blocks: tuple[FiniteSet, ...]
    reservoir: FiniteSet

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(canon_set(b) for b in self.blocks))
        object.__setattr__(self, "reservoir", canon_set(self.reservoir))
        if len(self.blocks) < 2:
            raise InputError("conditions need at least 2 blocks")
        seen: set[int] = set()
        for b in self.blocks:
            if seen & set(b):
                raise InputError(f"blocks overlap at {sorted(seen & set(b))}")
            seen |= set(b)
        if self.reservoir:
            lo = self.reservoir[0]
            for b in self.blocks:
                if b and b[-1] >= lo:
                    raise InputError(
                        f"block element {b[-1]} not below reservoir minimum {lo}"
                    )
        if seen & set(self.reservoir):
            raise InputError("blocks and reservoir overlap")

    @property
    def k(self) -> int:
        return len(self.blocks)

    def to_json_obj(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks], "reservoir": list(self.reservoir)}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "FCondition":
        try:
            return cls(
                tuple(tuple(b) for b in obj["blocks"]), tuple(obj["reservoir"])
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad condition JSON: {exc}") from None


def validate_condition(f: Coloring, cond: FCondition) -> bool:
    """Check that f colors every (block i element, reservoir element) pair i.

    Pairs outside f's window cannot be certified and fail the check.
    """
    if f.arity != 2:
        raise InputError("conditions live over pair colorings")
    if cond.k != f.colors:
        return False
    if cond.reservoir and cond.reservoir[-1] >= f.window:
        return False
    for i, block in enumerate(cond.blocks):
        for x in block:
            for y in cond.reservoir:
                if f.table[(x, y)] != i:
                    return False
    return True


def condition_extends(q: FCondition, p: FCondition) -> bool:
    """Blocks may only grow with reservoir elements; reservoirs only shrink."""
    if q.k != p.k:
        return False
    for eq, ep in zip(q.blocks, p.blocks):
        sq, sp = set(eq), set(ep)
        if not sp <= sq:
            return False
        if not sq - sp <= set(p.reservoir):
            return False
    return set(q.reservoir) <= set(p.reservoir)


# ---------------------------------------------------------------------------
# Enumeration machines


@dataclass(frozen=True)
class EnumMachine:
    """Finite table standing in for an enumeration operator.

    An entry maps (oracle set, m) to an output set of exactly m+2
    elements.  Queries match an entry when the queried oracle extends the
    entry's oracle only beyond its maximum element (the modeled use of
    the computation), so growing an oracle past the use never changes an
    answer.  Consistency of that rule and monotonicity of outputs in m
    are enforced at load time.
    """

    entries: dict[tuple[FiniteSet, int], FiniteSet]

    def __post_init__(self) -> None:
        items = sorted(self.entries.items())
        for pos, ((oracle, m), out) in enumerate(items):
            if m < 0:
                raise InputError(f"entry {pos}: negative argument {m}")
            if len(out) != m + 2:
                raise InputError(
                    f"entry {pos}: output of size {len(out)} at argument {m}, "
                    f"convention demands {m + 2}"
                )
            if not any(w > m for w in out):
                raise InputError(f"entry {pos}: no output element above {m}")
        for pos, ((o1, m1), out1) in enumerate(items):
            for (o2, m2), out2 in items[pos + 1 :]:
                if not _use_compatible(o1, o2):
                    continue
                if m1 == m2 and out1 != out2:
                    raise InputError(
                        f"entry {pos}: oracles {o1} and {o2} agree up to the use "
                        f"but outputs differ at argument {m1}"
                    )
                if m1 < m2 and not set(out1) <= set(out2):
                    raise InputError(
                        f"entry {pos}: outputs not monotone from argument {m1} to {m2}"
                    )
                if m2 < m1 and not set(out2) <= set(out1):
                    raise InputError(
                        f"entry {pos}: outputs not monotone from argument {m2} to {m1}"
                    )

    def query(self, oracle: Iterable[int], m: int) -> FiniteSet | None:
        """Output on the given oracle, or None when the table says nothing.

        Matches the entry with the largest oracle that the query extends
        only beyond its use.
        """
        s = set(canon_set(oracle))
        best: FiniteSet | None = None
        best_size = -1
        for (o, em), out in self.entries.items():
            if em != m or len(o) <= best_size:
                continue
            os = set(o)
            if os <= s and all(x > _use(o) for x in s - os):
                best, best_size = out, len(o)
        return best

    def arguments(self) -> list[int]:
        return sorted({m for _, m in self.entries})

    def to_json_obj(self) -> list:
        return [
            {"oracle": list(o), "m": m, "output": list(out)}
            for (o, m), out in sorted(self.entries.items())
        ]

    @classmethod
    def from_json_obj(cls, obj: Sequence) -> "EnumMachine":
        entries: dict[tuple[FiniteSet, int], FiniteSet] = {}
        for pos, row in enumerate(obj):
            try:
                key = (canon_set(row["oracle"]), int(row["m"]))
                out = canon_set(row["output"])
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"entry {pos}: {exc}") from None
            if key in entries:
                raise InputError(f"entry {pos}: duplicate oracle/argument pair")
            entries[key] = out
        return cls(entries)

    @classmethod
    def from_entries(
        cls, rows: Iterable[tuple[Iterable[int], int, Iterable[int]]]
    ) -> "EnumMachine":
        return cls({(canon_set(o), m): canon_set(out) for o, m, out in rows})


def _use(oracle: FiniteSet) -> int:
    return oracle[-1] if oracle else -1


def _use_compatible(o1: FiniteSet, o2: FiniteSet) -> bool:
    # some oracle could match both entries under the use rule
    s1, s2 = set(o1), set(o2)
    return all(x > _use(o1) for x in s2 - s1) and all(x > _use(o2) for x in s1 - s2)


# ---------------------------------------------------------------------------
# The question tree


@dataclass
class TreeNode:
    """One node of the question tree.

    Non-root nodes carry the label, argument and witness of the halting
    computation that created them; nodes whose partition question was
    asked also record the bound their children share (or the partition
    witnessing divergence when the answer was no).
    """

    address: tuple[int, ...]
    bound: int
    parts: tuple[FiniteSet, ...]
    witness_sets: tuple[FiniteSet, ...]
    reservoir: FiniteSet
    label: int | None = None
    arg: int | None = None
    witness: int | None = None
    child_bound: int | None = None
    question_arg: int | None = None
    refusing_partition: tuple[FiniteSet, ...] | None = None

    @property
    def depth(self) -> int:
        return len(self.address)


@dataclass
class Tree:
    k: int
    nodes: dict[tuple[int, ...], TreeNode] = field(default_factory=dict)

    @property
    def root(self) -> TreeNode:
        return self.nodes[()]

    def children(self, address: tuple[int, ...]) -> list[TreeNode]:
        out = []
        j = 0
        while address + (j,) in self.nodes:
            out.append(self.nodes[address + (j,)])
            j += 1
        return out

    def depth(self) -> int:
        return max(len(a) for a in self.nodes)

    def witnesses(self) -> list[int]:
        ws = {n.witness for n in self.nodes.values() if n.witness is not None}
        return sorted(ws)

    def to_json_obj(self) -> dict:
        def addr(a: tuple[int, ...]) -> str:
            return ".".join(map(str, a))

        out = {}
        for a, n in sorted(self.nodes.items()):
            out[addr(a)] = {
                "bound": n.bound,
                "parts": [list(p) for p in n.parts],
                "witness_sets": [list(w) for w in n.witness_sets],
                "reservoir": list(n.reservoir),
                "label": n.label,
                "arg": n.arg,
                "witness": n.witness,
                "child_bound": n.child_bound,
                "question_arg": n.question_arg,
            }
        return {"k": self.k, "nodes": out}


@dataclass(frozen=True)
class BuildCaps:
    """Hard limits on the finite question enumeration."""

    partition_cap: int = 6
    node_cap: int | None = 20000


@dataclass(frozen=True)
class BuildResult:
    tree: Tree
    witnesses: FiniteSet
    new_frontier: int


def _partitions(elems: FiniteSet, k: int):
    """All assignments of elems to k blocks, lexicographic in the
    assignment vector."""
    for assign in product(range(k), repeat=len(elems)):
        blocks = tuple(
            tuple(x for x, c in zip(elems, assign) if c == i) for i in range(k)
        )
        yield assign, blocks


def _find_halt(
    machines: Sequence[EnumMachine],
    fixed: Sequence[FiniteSet],
    blocks: tuple[FiniteSet, ...],
    m: int,
) -> tuple[int, FiniteSet, FiniteSet] | None:
    """Least label whose machine halts on its fixed part plus some subset of
    its block; subsets tried smallest first, then lexicographically."""
    for label in range(len(machines)):
        pool = blocks[label]
        for size in range(len(pool) + 1):
            for v in combinations(pool, size):
                out = machines[label].query(set(fixed[label]) | set(v), m)
                if out is not None:
                    return label, v, out
    return None


def build_tree(
    f: Coloring,
    cond: FCondition,
    machines: Sequence[EnumMachine],
    gk: Graph,
    caps: BuildCaps = BuildCaps(),
    frontier: int = 0,
) -> BuildResult:
    """Grow the question tree level by level up to depth |gk|.

    Per node the partition question is answered by exhaustive enumeration
    of the k^|reservoir| partitions (capped); a yes answer attaches one
    child per partition of the reservoir prefix below the computed bound,
    a no answer makes the node a leaf remembering the refusing partition.
    Bounds strictly increase in creation order, arguments are fixed per
    level above every earlier argument and witness, and reservoirs nest.
    """
    k = cond.k
    if len(machines) != k:
        raise InputError(f"need one machine per color, got {len(machines)} for k={k}")
    if not validate_condition(f, cond):
        raise PreconditionError("not a valid condition for this coloring")

    tree = Tree(k)
    tree.nodes[()] = TreeNode(
        address=(),
        bound=0,
        parts=tuple(() for _ in range(k)),
        witness_sets=tuple(() for _ in range(k)),
        reservoir=cond.reservoir,
    )
    max_bound = 0
    max_arg = 0
    max_witness = frontier

    def question(node: TreeNode, m: int) -> tuple[bool, tuple[FiniteSet, ...] | None]:
        if len(node.reservoir) > caps.partition_cap:
            raise CapExceededError(
                f"node {node.address}: reservoir of {len(node.reservoir)} exceeds "
                f"partition cap {caps.partition_cap}"
            )
        fixed = tuple(
            canon_set(set(cond.blocks[i]) | set(node.witness_sets[i])) for i in range(k)
        )
        for _, blocks in _partitions(node.reservoir, k):
            if _find_halt(machines, fixed, blocks, m) is None:
                return False, blocks
        return True, None

    level = [tree.nodes[()]]
    for _ in range(gk.order):
        m = max(frontier, max_arg, max_witness) + 1
        max_arg = m
        next_level: list[TreeNode] = []
        for node in level:
            halts, refusal = question(node, m)
            node.question_arg = m
            if not halts:
                node.refusing_partition = refusal
                continue
            fixed = tuple(
                canon_set(set(cond.blocks[i]) | set(node.witness_sets[i]))
                for i in range(k)
            )
            b = _question_bound(node.reservoir, machines, fixed, m, k)
            b = max(b, max_bound + 1)
            max_bound = b
            node.child_bound = b
            prefix = tuple(x for x in node.reservoir if x < b)
            rest = tuple(x for x in node.reservoir if x >= b)
            for j, (_, blocks) in enumerate(_partitions(prefix, k)):
                hit = _find_halt(machines, fixed, blocks, m)
                assert hit is not None, "prefix question certified yes"
                label, v, out = hit
                witness = min(w for w in out if w > m)
                max_witness = max(max_witness, witness)
                parts = tuple(
                    canon_set(set(node.parts[i]) | set(blocks[i])) for i in range(k)
                )
                wsets = list(node.witness_sets)
                wsets[label] = canon_set(set(wsets[label]) | set(v))
                reservoir = tuple(
                    y
                    for y in rest
                    if all(
                        f.table[(x, y)] == i for i in range(k) for x in blocks[i]
                    )
                )
                child = TreeNode(
                    address=node.address + (j,),
                    bound=b,
                    parts=parts,
                    witness_sets=tuple(wsets),
                    reservoir=reservoir,
                    label=label,
                    arg=m,
                    witness=witness,
                )
                tree.nodes[child.address] = child
                next_level.append(child)
                if caps.node_cap is not None and len(tree.nodes) > caps.node_cap:
                    raise CapExceededError(
                        f"tree exceeded {caps.node_cap} nodes at {child.address}"
                    )
        if not next_level:
            break
        level = next_level

    ws = tuple(tree.witnesses())
    new_frontier = max(ws) + 1 if ws else frontier
    return BuildResult(tree, ws, new_frontier)


def _question_bound(
    reservoir: FiniteSet,
    machines: Sequence[EnumMachine],
    fixed: Sequence[FiniteSet],
    m: int,
    k: int,
) -> int:
    """Least cutoff whose every prefix partition already halts somewhere.

    Well defined once the full-reservoir question is yes: the full cutoff
    works, and a witness for a shorter prefix stays a witness inside any
    longer one.
    """
    cuts = [0] + [x + 1 for x in reservoir]
    for b in cuts:
        prefix = tuple(x for x in reservoir if x < b)
        ok = True
        for _, blocks in _partitions(prefix, k):
            if _find_halt(machines, fixed, blocks, m) is None:
                ok = False
                break
        if ok:
            return b
    raise AssertionError("full reservoir cut must pass once the question is yes")


def check_tree_invariants(tree: Tree, cond: FCondition, f: Coloring) -> None:
    """Assert every structural invariant of a built tree; raises on violation."""
    nodes = list(tree.nodes.values())
    for n in nodes:
        for i, p in enumerate(n.parts):
            for x in p:
                if x not in cond.reservoir or x >= n.bound:
                    raise AssertionError(f"{n.address}: part element {x} out of place")
        for w, p in zip(n.witness_sets, n.parts):
            if not set(w) <= set(p):
                raise AssertionError(f"{n.address}: witness set escapes its part")
        for y in n.reservoir:
            if y not in cond.reservoir or y < n.bound:
                raise AssertionError(f"{n.address}: reservoir element {y} out of place")
            for i, p in enumerate(n.parts):
                for x in p:
                    if f.table[(x, y)] != i:
                        raise AssertionError(
                            f"{n.address}: pair ({x}, {y}) not colored {i}"
                        )
        if n.address:
            if n.label is None or n.arg is None or n.witness is None:
                raise AssertionError(f"{n.address}: missing creation data")
            if n.witness <= n.arg:
                raise AssertionError(f"{n.address}: witness not above argument")
    for a in nodes:
        for b in nodes:
            if len(a.address) < len(b.address):
                if a.bound >= b.bound:
                    raise AssertionError(
                        f"bounds not increasing: {a.address} vs {b.address}"
                    )
                if a.address and b.address:
                    if a.arg >= b.arg or a.witness >= b.witness:
                        raise AssertionError(
                            f"arguments/witnesses not increasing: {a.address} vs {b.address}"
                        )
            if b.address[: len(a.address)] == a.address and a.address != b.address:
                for i in range(tree.k):
                    if not set(a.parts[i]) <= set(b.parts[i]):
                        raise AssertionError(f"parts not nested: {a.address} {b.address}")
                    grown = set(b.parts[i]) - set(a.parts[i])
                    if not grown <= set(a.reservoir):
                        raise AssertionError(
                            f"parts grew outside the reservoir: {a.address} {b.address}"
                        )
                    if not set(a.witness_sets[i]) <= set(b.witness_sets[i]):
                        raise AssertionError(
                            f"witness sets not nested: {a.address} {b.address}"
                        )
                    wg = set(b.witness_sets[i]) - set(a.witness_sets[i])
                    if not wg <= set(b.parts[i]) - set(a.parts[i]):
                        raise AssertionError(
                            f"witness growth escapes part growth: {a.address} {b.address}"
                        )
                if not set(b.reservoir) <= set(a.reservoir):
                    raise AssertionError(
                        f"reservoirs not nested: {a.address} {b.address}"
                    )


# ---------------------------------------------------------------------------
# Witness graph


@dataclass(frozen=True)
class WitnessGraph:
    """Growing triangle-free graph with a frontier.

    Edges only ever join vertices at or beyond the frontier at the time
    they are added, so earlier vertices keep their degree forever.
    """

    frontier: int = 0
    edge_set: frozenset[tuple[int, int]] = frozenset()

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def vertices(self) -> FiniteSet:
        return canon_set({x for e in self.edge_set for x in e})

    def extended(self, new_edges: Iterable[tuple[int, int]], new_frontier: int) -> "WitnessGraph":
        edges = set(self.edge_set)
        hi = self.frontier
        for u, v in new_edges:
            if u == v:
                raise InputError(f"self-loop at {u}")
            if min(u, v) < self.frontier:
                raise FrontierError(
                    f"edge ({u}, {v}) touches a vertex behind frontier {self.frontier}"
                )
            edges.add((min(u, v), max(u, v)))
            hi = max(hi, u + 1, v + 1)
        if new_frontier < hi:
            raise FrontierError(
                f"new frontier {new_frontier} does not clear the new edges"
            )
        return WitnessGraph(new_frontier, frozenset(edges))

    def find_triangle(self) -> tuple[int, int, int] | None:
        vs = self.vertices()
        for a, b, c in combinations(vs, 3):
            if self.adjacent(a, b) and self.adjacent(b, c) and self.adjacent(a, c):
                return (a, b, c)
        return None

    def to_json_obj(self) -> dict:
        return {"frontier": self.frontier, "edges": sorted(map(list, self.edge_set))}


def extend_gamma(gamma: WitnessGraph, tree: Tree, gk: Graph) -> WitnessGraph:
    """Wire tree witnesses together following the template graph.

    Witnesses at depth i map to template vertex i-1; an edge appears
    exactly when the template has one, so same-depth witnesses are never
    joined and any new triangle would pull back to a triangle of the
    template.
    """
    named = [(n.depth, n.witness) for n in tree.nodes.values() if n.witness is not None]
    for _, w in named:
        if w <= gamma.frontier:
            raise FrontierError(f"witness {w} is not beyond frontier {gamma.frontier}")
    edges = set()
    for (di, wi), (dj, wj) in combinations(named, 2):
        if di != dj and wi != wj and gk.has_edge(di - 1, dj - 1):
            edges.add((min(wi, wj), max(wi, wj)))
    if not named:
        return gamma
    new_frontier = max(w for _, w in named) + 1
    return gamma.extended(edges, max(new_frontier, gamma.frontier))


# ---------------------------------------------------------------------------
# Path tracing


@dataclass(frozen=True)
class Divergence:
    depth: int
    address: tuple[int, ...]
    block: FiniteSet
    condition: FCondition


@dataclass(frozen=True)
class Convergence:
    depth: int
    address: tuple[int, ...]
    label: int
    pair: tuple[int, int]
    condition: FCondition


@dataclass(frozen=True)
class EmptyReservoir:
    depth: int
    address: tuple[int, ...]


TraceOutcome = Divergence | Convergence | EmptyReservoir


def trace_path(
    tree: Tree,
    f: Coloring,
    cond: FCondition,
    gk: Graph,
    tie_rule: str = "least",
) -> TraceOutcome:
    """Follow the majority-survivor path from the root to a verdict.

    At each non-leaf the reservoir prefix below the children's bound is
    colored element by element: each element gets the color keeping the
    most of the remaining reservoir alive (ties per ``tie_rule``), and
    the matching child is entered.  A leaf below full depth yields
    Divergence with the largest surviving block of its refusing
    partition; a full-depth leaf yields Convergence with a same-label
    adjacent witness pair, which must exist because the template graph
    is never colorable with the available labels.  An exhausted
    reservoir ends the trace as unverifiable at this scale.
    """
    if tie_rule not in ("least", "greatest"):
        raise InputError(f"unknown tie rule {tie_rule!r}")
    k = tree.k
    node = tree.root
    if not node.reservoir:
        return EmptyReservoir(0, ())
    while True:
        kids = tree.children(node.address)
        if not kids:
            break
        b = node.child_bound
        prefix = [x for x in node.reservoir if x < b]
        survivors = [y for y in node.reservoir if y >= b]
        assign = []
        for x in prefix:
            counts = [0] * k
            for y in survivors:
                counts[f.table[(x, y)]] += 1
            best = max(counts)
            hits = [i for i, c in enumerate(counts) if c == best]
            color = hits[0] if tie_rule == "least" else hits[-1]
            assign.append(color)
            survivors = [y for y in survivors if f.table[(x, y)] == color]
        index = 0
        for c in assign:
            index = index * k + c
        child = tree.nodes[node.address + (index,)]
        assert list(child.reservoir) == survivors
        if not child.reservoir:
            return EmptyReservoir(child.depth, child.address)
        node = child

    merged_blocks = tuple(
        canon_set(set(cond.blocks[i]) | set(node.witness_sets[i])) for i in range(k)
    )
    if node.depth == gk.order:
        path = [tree.nodes[node.address[:i]] for i in range(1, node.depth + 1)]
        for i, j in combinations(range(len(path)), 2):
            if path[i].label == path[j].label and gk.has_edge(i, j):
                return Convergence(
                    node.depth,
                    node.address,
                    path[i].label,
                    (path[i].witness, path[j].witness),
                    FCondition(merged_blocks, node.reservoir),
                )
        raise AssertionError(
            "full-depth path must repeat a label across a template edge"
        )
    refusal = node.refusing_partition
    if refusal is None:
        raise InputError("tree was truncated before its question was answered")
    sizes = [(-len(block), i) for i, block in enumerate(refusal)]
    _, label = min(sizes)
    block = refusal[label]
    if not block:
        return EmptyReservoir(node.depth, node.address)
    return Divergence(
        node.depth, node.address, block, FCondition(merged_blocks, block)
    )


def check_convergence_chain(
    tree: Tree,
    outcome: Convergence,
    cond: FCondition,
    machines: Sequence[EnumMachine],
) -> None:
    """Replay the containment chain behind a convergence verdict.

    Each path witness must still appear when its machine is queried with
    the final, larger witness set at the final argument: the witness-set
    growth happened beyond the use of the original computation, and
    outputs only grow with the argument.
    """
    leaf = tree.nodes[outcome.address]
    label = outcome.label
    final_oracle = set(cond.blocks[label]) | set(leaf.witness_sets[label])
    final_out = machines[label].query(final_oracle, leaf.arg)
    if final_out is None:
        raise AssertionError("final computation vanished")
    for i in range(1, len(outcome.address) + 1):
        n = tree.nodes[outcome.address[:i]]
        if n.label != label:
            continue
        oracle_then = set(cond.blocks[label]) | set(n.witness_sets[label])
        out_then = machines[label].query(oracle_then, n.arg)
        out_now = machines[label].query(final_oracle, n.arg)
        if out_then != out_now:
            raise AssertionError(
                f"oracle growth changed the computation at {n.address}"
            )
        if not set(out_now) <= set(final_out):
            raise AssertionError(f"outputs not monotone into the final argument")
        if n.witness not in final_out:
            raise AssertionError(f"witness {n.witness} escaped the final output")


# ---------------------------------------------------------------------------
# Color merging


@dataclass(frozen=True)
class MergeResult:
    """Outcome of collapsing colors the reservoir does not realize.

    ``realized`` lists the surviving colors in increasing order; the
    first one absorbs every unrealized color.  With a single survivor the
    reservoir is already limit homogeneous and no merged coloring is
    produced.
    """

    realized: FiniteSet
    coloring: Coloring | None
    blocks: tuple[FiniteSet, ...]

    @property
    def limit_homogeneous(self) -> bool:
        return len(self.realized) == 1


def realized_colors(f: Coloring, reservoir: FiniteSet, threshold: int) -> FiniteSet:
    """Colors some reservoir element takes against at least ``threshold``
    later reservoir elements."""
    hits = set()
    rs = canon_set(reservoir)
    for c in range(f.colors):
        for x in rs:
            count = sum(1 for y in rs if y > x and f.table[(x, y)] == c)
            if count >= threshold:
                hits.add(c)
                break
    return tuple(sorted(hits))


def color_merge(f: Coloring, cond: FCondition, threshold: int) -> MergeResult:
    """Collapse the colors the reservoir cannot realize into the least
    realized one and renumber.

    The merged coloring validates against the re-indexed blocks, and a
    set limit-homogeneous for a positive merged color is limit
    homogeneous for the original color it renames.
    """
    if f.arity != 2:
        raise InputError("color merging lives over pair colorings")
    if cond.k != f.colors:
        raise InputError(
            f"condition has {cond.k} blocks, coloring has {f.colors} colors"
        )
    if threshold < 1:
        raise InputError(f"threshold must be positive, got {threshold}")
    realized = realized_colors(f, cond.reservoir, threshold)
    if not realized:
        raise InputError(
            "window too small: no color recurs through the reservoir"
        )
    blocks = tuple(cond.blocks[c] for c in realized)
    if len(realized) == 1:
        return MergeResult(realized, None, blocks)
    index = {c: i for i, c in enumerate(realized)}
    merged = Coloring.from_function(
        2,
        len(realized),
        f.window,
        lambda x, y: index.get(f.table[(x, y)], 0),
    )
    return MergeResult(realized, merged, blocks)


def is_x_minimal(
    f: Coloring, cond: FCondition, family: Iterable[FCondition], threshold: int
) -> bool:
    """True when no condition in the supplied family realizes strictly fewer
    colors; minimality is only ever certified against a finite family."""
    own = len(realized_colors(f, cond.reservoir, threshold))
    return all(
        len(realized_colors(f, other.reservoir, threshold)) >= own for other in family
    )


# ---------------------------------------------------------------------------
# Stage schedule replay


@dataclass(frozen=True)
class OddStage:
    """Direct diagonalization step: find an argument whose output holds two
    fresh vertices and join them."""

    machine: EnumMachine


@dataclass(frozen=True)
class EvenStage:
    """Question-tree step for one coloring, condition and machine tuple."""

    coloring: Coloring
    condition: FCondition
    machines: tuple[EnumMachine, ...]
    gk: Graph | None = None


Stage = OddStage | EvenStage


@dataclass(frozen=True)
class StageRecord:
    index: int
    kind: str
    outcome: str
    detail: dict

    def to_json_obj(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "outcome": self.outcome,
            "detail": self.detail,
        }


def run_stage_schedule(
    stages: Sequence[Stage],
    gamma: WitnessGraph | None = None,
    caps: BuildCaps = BuildCaps(),
) -> tuple[WitnessGraph, tuple[StageRecord, ...]]:
    """Replay a finite stage list, growing the witness graph.

    Odd-style stages add one edge between two fresh output elements when
    the machine provides them, else skip.  Even-style stages validate
    their condition (failure skips, mirroring the construction), build
    the question tree, extend the witness graph, and trace a verdict.
    Cap overruns are logged per stage rather than aborting the run.
    """
    if gamma is None:
        gamma = WitnessGraph()
    log: list[StageRecord] = []
    for idx, stage in enumerate(stages):
        if isinstance(stage, OddStage):
            hit = None
            for m in stage.machine.arguments():
                out = stage.machine.query((), m)
                if out is None:
                    continue
                fresh = [w for w in out if w > gamma.frontier]
                if len(fresh) >= 2:
                    hit = (m, fresh[0], fresh[1])
                    break
            if hit is None:
                log.append(StageRecord(idx, "odd", "skip", {}))
            else:
                m, x, y = hit
                gamma = gamma.extended([(x, y)], max(x, y) + 1)
                log.append(
                    StageRecord(idx, "odd", "extend", {"m": m, "edge": [x, y]})
                )
            continue
        if not validate_condition(stage.coloring, stage.condition):
            log.append(StageRecord(idx, "even", "skip", {"reason": "not a condition"}))
            continue
        gk = stage.gk if stage.gk is not None else gk_family(stage.condition.k)
        try:
            built = build_tree(
                stage.coloring,
                stage.condition,
                stage.machines,
                gk,
                caps,
                frontier=gamma.frontier,
            )
        except CapExceededError as exc:
            log.append(StageRecord(idx, "even", "cap-exceeded", {"reason": str(exc)}))
            continue
        gamma = extend_gamma(gamma, built.tree, gk)
        outcome = trace_path(built.tree, stage.coloring, stage.condition, gk)
        if isinstance(outcome, Convergence):
            log.append(
                StageRecord(
                    idx,
                    "even",
                    "converge",
                    {
                        "depth": outcome.depth,
                        "label": outcome.label,
                        "pair": list(outcome.pair),
                    },
                )
            )
        elif isinstance(outcome, Divergence):
            log.append(
                StageRecord(
                    idx,
                    "even",
                    "diverge",
                    {"depth": outcome.depth, "block": list(outcome.block)},
                )
            )
        else:
            log.append(
                StageRecord(idx, "even", "empty-reservoir", {"depth": outcome.depth})
            )
    return gamma, tuple(log)


def stage_log_to_json(records: Iterable[StageRecord]) -> str:
    return json.dumps([r.to_json_obj() for r in records], indent=2)
