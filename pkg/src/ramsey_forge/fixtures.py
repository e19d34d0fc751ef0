"""Bundled machine tables and ready-made simulator scenarios.

All fixtures are deterministic constructions; the machine tables cover
the behaviours the question tree distinguishes: machines that halt
everywhere, machines gated on specific reservoir elements, machines that
never halt, and mixtures thereof.  Output streams start low because each
level's witness pushes the next level's argument past it, and arguments
must stay inside the finite tables for a tree to reach full depth.
"""

from __future__ import annotations

from itertools import islice
from typing import Iterator

from .colorings import Coloring
from .diag import EnumMachine, EvenStage, FCondition, OddStage, Stage
from .gadgets import Graph, gk_family


def _stream(start: int, step: int = 1) -> Iterator[int]:
    x = start
    while True:
        yield x
        x += step


def arithmetic_machine(
    start: int, args: int = 40, step: int = 1, oracle: tuple[int, ...] = ()
) -> EnumMachine:
    """Machine whose output at m is the first m+2 terms of an arithmetic
    stream, defined for every argument below ``args``.

    With an empty oracle key the machine halts on every oracle (anything
    extends the empty set beyond its use); with a nonempty key it halts
    exactly on oracles containing the key whose other elements all lie
    beyond the key's maximum.
    """
    rows = []
    for m in range(args):
        out = tuple(islice(_stream(start, step), m + 2))
        rows.append((oracle, m, out))
    return EnumMachine.from_entries(rows)


def silent_machine() -> EnumMachine:
    """Machine with an empty table: never halts."""
    return EnumMachine({})


def machine_tables() -> tuple[EnumMachine, ...]:
    """The bundled suite: twelve tables with distinct halting behaviour."""
    return (
        arithmetic_machine(0),
        arithmetic_machine(1),
        arithmetic_machine(0, step=2),
        arithmetic_machine(2, step=3),
        arithmetic_machine(0, oracle=(4,)),
        arithmetic_machine(1, oracle=(5,)),
        arithmetic_machine(0, oracle=(4, 6)),
        arithmetic_machine(2, oracle=(7,)),
        arithmetic_machine(1, oracle=(10,)),
        arithmetic_machine(0, args=12),
        arithmetic_machine(3, args=8, step=5),
        silent_machine(),
    )


def constant_pair_coloring(window: int, color: int = 0, k: int = 2) -> Coloring:
    return Coloring.constant(2, k, window, color)


def single_path_setup() -> tuple[Coloring, FCondition, tuple[EnumMachine, ...], Graph]:
    """Reservoir so sparse that every level has exactly one partition.

    Always-halting machines answer yes at every node, but the growing
    bounds never reach the reservoir elements, so each node has a single
    child and the tree is one path of full depth: the canonical
    convergence scenario with all labels equal.
    """
    f = constant_pair_coloring(40)
    cond = FCondition(((), ()), (30, 35))
    machines = (arithmetic_machine(0), arithmetic_machine(1))
    return f, cond, machines, gk_family(2)


def branching_setup() -> tuple[Coloring, FCondition, tuple[EnumMachine, ...], Graph]:
    """Reservoir element 4 splits the tree: both machines are gated on it,
    so the first cutoff must pass 4 and the root gets one child per side
    of the partition, with the label tracking which side holds 4."""
    f = constant_pair_coloring(40)
    cond = FCondition(((), ()), (4, 20, 30))
    machines = (
        arithmetic_machine(0, oracle=(4,)),
        arithmetic_machine(1, oracle=(4,)),
    )
    return f, cond, machines, gk_family(2)


def divergent_setup() -> tuple[Coloring, FCondition, tuple[EnumMachine, ...], Graph]:
    """Machines that never halt: the root question answers no immediately."""
    f = constant_pair_coloring(20)
    cond = FCondition(((), ()), (8, 12, 16))
    machines = (silent_machine(), silent_machine())
    return f, cond, machines, gk_family(2)


def stage_schedule() -> list[Stage]:
    """A small end-to-end run: one direct diagonalization stage, one
    converging tree stage, one refused condition, one diverging stage."""
    f = constant_pair_coloring(40)
    good = FCondition(((), ()), (30, 35))
    bad_f = Coloring.from_function(2, 2, 40, lambda x, y: 1 if (x, y) == (2, 30) else 0)
    bad = FCondition(((2,), ()), (30, 35))
    return [
        OddStage(arithmetic_machine(1, args=6)),
        EvenStage(f, good, (arithmetic_machine(0), arithmetic_machine(1))),
        EvenStage(bad_f, bad, (arithmetic_machine(0), arithmetic_machine(1))),
        EvenStage(f, good, (silent_machine(), silent_machine())),
    ]
