"""Finite-window colorings of d-tuples and their exact combinatorics.

Everything is windowed: a coloring assigns one of k colors to every
strictly increasing d-tuple over [0, n).  Searches are exhaustive within
the window and deterministic (lexicographic subset order, first hit
wins), so results double as golden values for the naive oracles in
:mod:`ramsey_forge.oracle`.

Sets of naturals are plain sorted tuples throughout; ``canon_set``
normalizes and validates.
"""

from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping

from .errors import InputError, WindowTooSmallError

FiniteSet = tuple[int, ...]


def canon_set(xs: Iterable[int]) -> FiniteSet:
    """Sort, validate and freeze a finite set of naturals."""
    elems = tuple(sorted(xs))
    for x in elems:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise InputError(f"finite sets hold naturals, got {x!r}")
    if len(set(elems)) != len(elems):
        raise InputError(f"duplicate elements in {elems}")
    return elems


@dataclass(frozen=True, eq=True)
class Coloring:
    """Total map from strictly increasing ``arity``-tuples over [0, window) to colors.

    Tuples are unordered: lookups sort their argument first, and the
    table is keyed by the sorted form.
    """

    arity: int
    colors: int
    window: int
    table: dict[tuple[int, ...], int]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise InputError(f"arity must be >= 1, got {self.arity}")
        if self.colors < 2:
            raise InputError(f"need at least 2 colors, got {self.colors}")
        if self.window < self.arity:
            raise InputError(
                f"window {self.window} too small for arity {self.arity}"
            )
        expected = set(combinations(range(self.window), self.arity))
        got = set(self.table)
        if got != expected:
            missing = sorted(expected - got)[:3]
            extra = sorted(got - expected)[:3]
            raise InputError(
                f"coloring table is not total on the window: "
                f"missing {missing}, unexpected {extra}"
            )
        for tup, c in self.table.items():
            if not 0 <= c < self.colors:
                raise InputError(f"color {c} out of range at {tup}")

    # -- construction -------------------------------------------------

    @classmethod
    def from_function(
        cls, arity: int, colors: int, window: int, fn: Callable[..., int]
    ) -> "Coloring":
        table = {t: fn(*t) for t in combinations(range(window), arity)}
        return cls(arity, colors, window, table)

    @classmethod
    def constant(cls, arity: int, colors: int, window: int, color: int) -> "Coloring":
        return cls.from_function(arity, colors, window, lambda *t: color)

    # -- access -------------------------------------------------------

    def value(self, xs: Iterable[int]) -> int:
        key = tuple(sorted(xs))
        try:
            return self.table[key]
        except KeyError:
            raise InputError(
                f"{key} is not an increasing {self.arity}-tuple over [0, {self.window})"
            ) from None

    def tuples(self) -> Iterator[tuple[int, ...]]:
        return combinations(range(self.window), self.arity)

    def truncate(self, window: int) -> "Coloring":
        """Restrict to the prefix window [0, window)."""
        if window > self.window:
            raise InputError(f"cannot grow window {self.window} to {window}")
        table = {t: c for t, c in self.table.items() if t[-1] < window}
        return Coloring(self.arity, self.colors, window, table)

    def restrict(self, elems: Iterable[int]) -> "Coloring":
        """Re-index onto a subset via the order bijection with [0, |S|)."""
        s = canon_set(elems)
        if s and s[-1] >= self.window:
            raise InputError(f"{s[-1]} lies outside window [0, {self.window})")
        if len(s) < self.arity:
            raise InputError(f"subset of size {len(s)} below arity {self.arity}")
        table = {
            idx: self.table[tuple(s[i] for i in idx)]
            for idx in combinations(range(len(s)), self.arity)
        }
        return Coloring(self.arity, self.colors, len(s), table)

    # -- serialization ------------------------------------------------

    def to_text(self) -> str:
        lines = [f"coloring d={self.arity} k={self.colors} n={self.window}"]
        for t in self.tuples():
            lines.append(" ".join(map(str, t)) + f" {self.table[t]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Coloring":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InputError("empty coloring file")
        m = re.fullmatch(r"coloring d=(\d+) k=(\d+) n=(\d+)", lines[0].strip())
        if not m:
            raise InputError(f"bad coloring header: {lines[0]!r}")
        d, k, n = (int(g) for g in m.groups())
        table = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != d + 1:
                raise InputError(f"expected {d} entries plus a color: {ln!r}")
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise InputError(f"non-integer entry: {ln!r}") from None
            tup = tuple(nums[:d])
            if tuple(sorted(set(tup))) != tup:
                raise InputError(f"tuple must be strictly increasing: {ln!r}")
            if tup in table:
                raise InputError(f"duplicate tuple {tup}")
            table[tup] = nums[d]
        return cls(d, k, n, table)

    def to_json_obj(self) -> dict:
        return {
            "d": self.arity,
            "k": self.colors,
            "n": self.window,
            "table": [list(t) + [self.table[t]] for t in self.tuples()],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Coloring":
        try:
            d, k, n = int(obj["d"]), int(obj["k"]), int(obj["n"])
            rows = obj["table"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad coloring JSON: {exc}") from None
        table = {}
        for row in rows:
            tup, c = tuple(row[:d]), row[d]
            if tup in table:
                raise InputError(f"duplicate tuple {tup}")
            table[tup] = c
        return cls(d, k, n, table)

    @classmethod
    def loads(cls, text: str) -> "Coloring":
        """Parse either the text format or a JSON object."""
        if text.lstrip().startswith("{"):
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InputError(f"bad JSON: {exc}") from None
            return cls.from_json_obj(obj)
        return cls.from_text(text)


# ---------------------------------------------------------------------------
# Homogeneous-set search


def find_homogeneous(c: Coloring, color: int, size: int) -> FiniteSet | None:
    """Exhaustive search for a set of ``size`` elements monochromatic in ``color``.

    Subsets are explored in lexicographic order and the first hit is
    returned, so the result is the lexicographically least witness.
    Returns None when no witness exists within the window; a window
    smaller than ``size`` raises WindowTooSmallError instead, since in
    that case absence is a fact about the window, not the coloring.
    """
    if not 0 <= color < c.colors:
        raise InputError(f"color {color} out of range [0, {c.colors})")
    if size < c.arity:
        raise InputError(f"size {size} below arity {c.arity}")
    if size > c.window:
        raise WindowTooSmallError(
            f"cannot search for a set of size {size} in window [0, {c.window})"
        )
    table = c.table
    arity = c.arity

    def extend(prefix: list[int], start: int) -> FiniteSet | None:
        if len(prefix) == size:
            return tuple(prefix)
        # leave room for the remaining picks
        for x in range(start, c.window - (size - len(prefix)) + 1):
            ok = True
            for sub in combinations(prefix, arity - 1):
                if table[tuple(sorted(sub + (x,)))] != color:
                    ok = False
                    break
            if ok:
                prefix.append(x)
                hit = extend(prefix, x + 1)
                if hit is not None:
                    return hit
                prefix.pop()
        return None

    return extend([], 0)


def is_bounded_instance(c: Coloring, bound: int) -> bool:
    """True when no color-1 homogeneous set of size ``bound`` fits in the window."""
    if c.colors != 2:
        raise InputError("bounded instances are 2-colorings")
    return find_homogeneous(c, 1, bound) is None


# ---------------------------------------------------------------------------
# Limit colorings


@dataclass(frozen=True)
class StabilityReport:
    """Per-tuple account of what the window could not certify."""

    threshold: int
    unstable: tuple[tuple[int, ...], ...]
    empty_tail: tuple[tuple[int, ...], ...]

    @property
    def is_stable(self) -> bool:
        return not self.unstable and not self.empty_tail


def limit_coloring(c: Coloring, threshold: int) -> tuple[Coloring, StabilityReport]:
    """Collapse the last coordinate by reading tail values past ``threshold``.

    The output window shrinks by one: the tuple (window-d, ..., window-1)
    has no tail at all, so the last window element can never be certified
    and is dropped.  With that convention the constant-tail embedding
    round-trips exactly (see ``embed_constant_tail``).

    For each remaining tuple the tail is every y in [threshold, window)
    above the tuple's maximum.  A non-constant tail is flagged unstable
    and the value at the largest y is used.
    """
    if c.arity < 2:
        raise InputError("limit colorings need arity at least 2")
    if not 0 <= threshold < c.window:
        raise InputError(f"threshold {threshold} outside [0, {c.window})")
    out_window = c.window - 1
    out_arity = c.arity - 1
    table: dict[tuple[int, ...], int] = {}
    unstable: list[tuple[int, ...]] = []
    empty_tail: list[tuple[int, ...]] = []
    for xs in combinations(range(out_window), out_arity):
        lo = max(threshold, xs[-1] + 1)
        vals = [c.table[xs + (y,)] for y in range(lo, c.window)]
        if not vals:
            empty_tail.append(xs)
            table[xs] = 0
            continue
        table[xs] = vals[-1]
        if any(v != vals[-1] for v in vals):
            unstable.append(xs)
    report = StabilityReport(threshold, tuple(unstable), tuple(empty_tail))
    return Coloring(out_arity, c.colors, out_window, table), report


def embed_constant_tail(g: Coloring) -> Coloring:
    """Lift g one arity up with f(xs, y) = g(xs); window grows by one."""
    table = {}
    for t in combinations(range(g.window + 1), g.arity + 1):
        table[t] = g.table[t[:-1]]
    return Coloring(g.arity + 1, g.colors, g.window + 1, table)


def stability_threshold(c: Coloring) -> int:
    """Least stage past which every tuple's tail value stops changing.

    Returns window when some tuple still flips at the very last stage.
    """
    if c.arity < 2:
        raise InputError("stability thresholds need arity at least 2")
    worst = 0
    for xs in combinations(range(c.window - 1), c.arity - 1):
        ys = range(xs[-1] + 1, c.window)
        vals = [c.table[xs + (y,)] for y in ys]
        final = vals[-1]
        for y, v in zip(reversed(ys), reversed(vals)):
            if v != final:
                worst = max(worst, y + 1)
                break
    return worst


# ---------------------------------------------------------------------------
# Approximated functions (finite mind-change schedules)


@dataclass(frozen=True)
class ApproxFunction:
    """Function into k colors given by a base table plus a mind-change schedule.

    ``schedule`` entries are (stage, position, new value); per position
    the stages must be strictly increasing, so the value at any stage at
    or past the last change is the limit value.
    """

    colors: int
    base: tuple[int, ...]
    schedule: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.colors < 2:
            raise InputError(f"need at least 2 colors, got {self.colors}")
        for v in self.base:
            if not 0 <= v < self.colors:
                raise InputError(f"base value {v} out of range")
        seen: dict[int, int] = {}
        for stage, pos, val in self.schedule:
            if stage < 0 or not 0 <= pos < len(self.base):
                raise InputError(f"bad schedule entry ({stage}, {pos}, {val})")
            if not 0 <= val < self.colors:
                raise InputError(f"schedule value {val} out of range")
            if pos in seen and stage <= seen[pos]:
                raise InputError(
                    f"stages must strictly increase per position, got {stage} after "
                    f"{seen[pos]} at position {pos}"
                )
            seen[pos] = stage

    @property
    def domain(self) -> int:
        return len(self.base)

    def at_stage(self, x: int, stage: int) -> int:
        """Value at position x as of the given stage."""
        if not 0 <= x < len(self.base):
            raise InputError(f"position {x} outside [0, {len(self.base)})")
        v = self.base[x]
        for s, pos, val in sorted(self.schedule):
            if pos == x and s <= stage:
                v = val
        return v

    def limit(self, x: int) -> int:
        last = max((s for s, _, _ in self.schedule), default=0)
        return self.at_stage(x, last)

    def last_change(self) -> int:
        """Stage of the final mind-change, 0 when the schedule is empty."""
        return max((s for s, _, _ in self.schedule), default=0)

    def to_json_obj(self) -> dict:
        return {
            "k": self.colors,
            "base": list(self.base),
            "schedule": [list(e) for e in self.schedule],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "ApproxFunction":
        try:
            return cls(
                int(obj.get("k", 2)),
                tuple(int(v) for v in obj["base"]),
                tuple(tuple(int(v) for v in e) for e in obj.get("schedule", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad approx-function JSON: {exc}") from None


# ---------------------------------------------------------------------------
# Ordinals in Cantor normal form below omega^omega


@functools.total_ordering
@dataclass(frozen=True)
class OrdinalCNF:
    """omega^m * a_m + ... + omega^0 * a_0, stored low exponent first.

    The empty coefficient tuple is 0; otherwise the leading coefficient
    is nonzero.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a in self.coeffs:
            if a < 0:
                raise InputError(f"negative coefficient {a}")
        if self.coeffs and self.coeffs[-1] == 0:
            raise InputError("leading coefficient must be nonzero")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "OrdinalCNF":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    @classmethod
    def zero(cls) -> "OrdinalCNF":
        return cls(())

    @classmethod
    def omega_power(cls, m: int) -> "OrdinalCNF":
        return cls((0,) * m + (1,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def _key(self) -> tuple:
        return (len(self.coeffs), tuple(reversed(self.coeffs)))

    def __lt__(self, other: "OrdinalCNF") -> bool:
        return self._key() < other._key()

    def natural_sum(self, other: "OrdinalCNF") -> "OrdinalCNF":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return OrdinalCNF.from_coeffs(x + y for x, y in zip(a, b))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for m in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[m]
            if a == 0:
                continue
            if m == 0:
                parts.append(str(a))
            elif m == 1:
                parts.append(f"w*{a}" if a != 1 else "w")
            else:
                parts.append(f"w^{m}*{a}" if a != 1 else f"w^{m}")
        return " + ".join(parts)


def natural_sum(a: OrdinalCNF, b: OrdinalCNF) -> OrdinalCNF:
    """Coefficient-wise sum of Cantor normal forms."""
    return a.natural_sum(b)


def rank_of(c: Coloring, elems: Iterable[int]) -> OrdinalCNF:
    """omega to the size of the largest color-1 homogeneous subset of ``elems``.

    Singletons are vacuously homogeneous (they contain no pairs), so any
    nonempty set has rank at least omega^1; the empty set has rank
    omega^0 = 1.
    """
    if c.colors != 2:
        raise InputError("ranks are defined for 2-colorings")
    if c.arity != 2:
        raise InputError("ranks are defined for pair colorings")
    xs = canon_set(elems)
    if xs and xs[-1] >= c.window:
        raise InputError(f"{xs[-1]} lies outside window [0, {c.window})")
    if not xs:
        return OrdinalCNF.omega_power(0)
    table = c.table
    best = 1

    def grow(chain: list[int], start: int) -> None:
        nonlocal best
        best = max(best, len(chain))
        for i in range(start, len(xs)):
            if len(chain) + 1 + (len(xs) - i - 1) < best + 1:
                break
            x = xs[i]
            if all(table[(y, x)] == 1 for y in chain):
                chain.append(x)
                grow(chain, i + 1)
                chain.pop()

    grow([], 0)
    return OrdinalCNF.omega_power(best)
