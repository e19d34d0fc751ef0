"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict (absence certified, check
failed), 2 input error, 3 budget or cap exceeded.  With ``--json`` all
results and errors are machine-readable JSON; the ``oracle`` subcommands
run the naive reference implementations so any answer can be re-derived
from the shell.  The environment variable RAMSEY_FORGE_BUDGET caps node
expansions across the searches of one invocation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diag, em, encoder, fixtures, gadgets, oracle
from .budget import Budget
from .colorings import (
    ApproxFunction,
    Coloring,
    find_homogeneous,
    limit_coloring,
    stability_threshold,
)
from .errors import BudgetExceededError, InputError, RamseyForgeError

SUCCESS, NEGATIVE, BAD_INPUT, EXHAUSTED = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_coloring(path: str) -> Coloring:
    return Coloring.loads(_read(path))


def _load_graph(path: str, fmt: str) -> gadgets.Graph:
    text = _read(path)
    if fmt == "json" or text.lstrip().startswith("{"):
        return gadgets.graph_from_json_obj(_parse_json(text))
    return gadgets.graph_from_text(text)


def _load_digraph(path: str, fmt: str) -> gadgets.Digraph:
    text = _read(path)
    if fmt == "json" or text.lstrip().startswith("{"):
        return gadgets.digraph_from_json_obj(_parse_json(text))
    return gadgets.digraph_from_text(text)


def _parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON: {exc}") from None


def _load_machines(path: str) -> list[diag.EnumMachine]:
    obj = _parse_json(_read(path))
    if obj and isinstance(obj[0], dict):
        return [diag.EnumMachine.from_json_obj(obj)]
    return [diag.EnumMachine.from_json_obj(rows) for rows in obj]


class _Out:
    """Printing helper that respects --json."""

    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, human: str, payload) -> None:
        if self.as_json:
            print(json.dumps(payload, indent=2))
        else:
            print(human)

    def error(self, kind: str, message: str) -> None:
        if self.as_json:
            print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
        else:
            print(f"error ({kind}): {message}", file=sys.stderr)


def _write_or_print(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommand handlers; each returns an exit code.


def _cmd_homog(args, out: _Out, budget: Budget) -> int:
    c = _load_coloring(args.file)
    hit = find_homogeneous(c, args.color, args.size)
    if hit is None:
        out.emit("absent", {"result": None})
        return NEGATIVE
    out.emit(" ".join(map(str, hit)), {"result": list(hit)})
    return SUCCESS


def _cmd_validate_brt(args, out: _Out, budget: Budget) -> int:
    c = _load_coloring(args.file)
    witness = find_homogeneous(c, 1, args.bound)
    if witness is None:
        out.emit(f"valid bounded instance at bound {args.bound}", {"valid": True})
        return SUCCESS
    out.emit(
        f"not an instance: {' '.join(map(str, witness))} is color-1 homogeneous",
        {"valid": False, "witness": list(witness)},
    )
    return NEGATIVE


def _cmd_encode_stable(args, out: _Out, budget: Budget) -> int:
    h = _load_coloring(args.file)
    f = encoder.encode_stable(h, args.bound)
    threshold = stability_threshold(f)
    _write_or_print(f.to_text(), args.out)
    out.emit(
        f"encoded; limit certified past stage {threshold}",
        {"threshold": threshold},
    )
    return SUCCESS


def _cmd_coh_family(args, out: _Out, budget: Budget) -> int:
    f = _load_coloring(args.file)
    fam = encoder.coh_family(f)
    payload = [
        {"tuple": list(xs), "color": i, "set": list(r)} for (xs, i), r in fam.items()
    ]
    human = "\n".join(
        f"R[{','.join(map(str, xs))};{i}] = {{{', '.join(map(str, r))}}}"
        for (xs, i), r in fam.items()
    )
    out.emit(human, payload)
    return SUCCESS


def _cmd_em_max_transitive(args, out: _Out, budget: Budget) -> int:
    c = _load_coloring(args.file)
    s = em.max_transitive_subset(c)
    out.emit(" ".join(map(str, s)), {"result": list(s)})
    return SUCCESS


def _cmd_brt22_solve(args, out: _Out, budget: Budget) -> int:
    c = _load_coloring(args.file)
    h = em.brt22_solve(c, args.bound)
    out.emit(" ".join(map(str, h)), {"result": list(h)})
    return SUCCESS


def _cmd_gadget_budget(args, out: _Out, budget: Budget) -> int:
    n = gadgets.preservation_budget(args.k, args.bound)
    out.emit(str(n), {"result": n})
    return SUCCESS


def _cmd_gadget_check_digraph(args, out: _Out, budget: Budget) -> int:
    d = _load_digraph(args.file, args.format)
    tri = gadgets.find_transitive_triangle(d)
    indep = gadgets.max_independent(d)
    payload = {
        "transitive_triangle": list(tri) if tri else None,
        "max_independent": list(indep),
    }
    if tri is None:
        out.emit(f"no transitive triangle; max independent set {list(indep)}", payload)
        return SUCCESS
    out.emit(f"transitive triangle {tri}; max independent set {list(indep)}", payload)
    return NEGATIVE


def _cmd_gadget_search(args, out: _Out, budget: Budget) -> int:
    g = gadgets.search_triangle_free(args.vertices, args.bound, budget=budget)
    if g is None:
        out.emit("certified-absent", {"result": None})
        return NEGATIVE
    text = gadgets.graph_to_text(g)
    if args.out:
        Path(args.out).write_text(text)
    out.emit(
        "exists\n" + text.rstrip(), {"result": gadgets.graph_to_json_obj(g)}
    )
    return SUCCESS


def _cmd_gadget_mycielski(args, out: _Out, budget: Budget) -> int:
    g = _load_graph(args.file, args.format)
    m = gadgets.mycielskian(g)
    text = gadgets.graph_to_text(m)
    if args.out:
        Path(args.out).write_text(text)
    out.emit(text.rstrip(), {"result": gadgets.graph_to_json_obj(m)})
    return SUCCESS


def _cmd_gadget_chromatic(args, out: _Out, budget: Budget) -> int:
    g = _load_graph(args.file, args.format)
    chi = gadgets.chromatic_number(g, budget=budget)
    out.emit(str(chi), {"result": chi})
    return SUCCESS


def _cmd_gadget_instance(args, out: _Out, budget: Budget) -> int:
    d = _load_digraph(args.digraph, args.format)
    g = ApproxFunction.from_json_obj(_parse_json(_read(args.approx)))
    inst = gadgets.instance_from_digraph(d, g, args.window)
    if args.out_limit:
        Path(args.out_limit).write_text(inst.limit.to_text())
    if args.out_staged:
        Path(args.out_staged).write_text(inst.staged.to_text())
    if not args.out_limit and not args.out_staged:
        _write_or_print(inst.limit.to_text(), None)
    out.emit(
        "instance built",
        {"limit": inst.limit.to_json_obj(), "staged": inst.staged.to_json_obj()},
    )
    return SUCCESS


def _diag_inputs(args):
    f = _load_coloring(args.coloring)
    cond = diag.FCondition.from_json_obj(_parse_json(_read(args.condition)))
    machines = _load_machines(args.machines)
    gk = gadgets.gk_family(args.gk)
    caps = diag.BuildCaps(partition_cap=args.cap_partition)
    return f, cond, machines, gk, caps


def _cmd_diag_build_tree(args, out: _Out, budget: Budget) -> int:
    f, cond, machines, gk, caps = _diag_inputs(args)
    built = diag.build_tree(f, cond, machines, gk, caps, frontier=args.frontier)
    payload = {
        "tree": built.tree.to_json_obj(),
        "witnesses": list(built.witnesses),
        "new_frontier": built.new_frontier,
    }
    out.emit(json.dumps(payload, indent=2), payload)
    return SUCCESS


def _cmd_diag_trace(args, out: _Out, budget: Budget) -> int:
    f, cond, machines, gk, caps = _diag_inputs(args)
    built = diag.build_tree(f, cond, machines, gk, caps, frontier=args.frontier)
    outcome = diag.trace_path(built.tree, f, cond, gk, tie_rule=args.tie)
    if isinstance(outcome, diag.Convergence):
        payload = {
            "outcome": "convergence",
            "depth": outcome.depth,
            "label": outcome.label,
            "pair": list(outcome.pair),
            "condition": outcome.condition.to_json_obj(),
        }
        out.emit(f"convergence at depth {outcome.depth}: pair {outcome.pair}", payload)
        return SUCCESS
    if isinstance(outcome, diag.Divergence):
        payload = {
            "outcome": "divergence",
            "depth": outcome.depth,
            "block": list(outcome.block),
            "condition": outcome.condition.to_json_obj(),
        }
        out.emit(f"divergence at depth {outcome.depth}", payload)
        return SUCCESS
    out.emit(
        f"reservoir exhausted at depth {outcome.depth}: unverifiable at this scale",
        {"outcome": "empty-reservoir", "depth": outcome.depth},
    )
    return EXHAUSTED


def _cmd_diag_run_stages(args, out: _Out, budget: Budget) -> int:
    obj = _parse_json(_read(args.schedule))
    stages: list[diag.Stage] = []
    for row in obj.get("stages", []):
        kind = row.get("kind")
        if kind == "odd":
            stages.append(
                diag.OddStage(diag.EnumMachine.from_json_obj(row["machine"]))
            )
        elif kind == "even":
            stages.append(
                diag.EvenStage(
                    Coloring.from_json_obj(row["coloring"]),
                    diag.FCondition.from_json_obj(row["condition"]),
                    tuple(
                        diag.EnumMachine.from_json_obj(rows)
                        for rows in row["machines"]
                    ),
                )
            )
        else:
            raise InputError(f"stage kind must be odd or even, got {kind!r}")
    gamma = diag.WitnessGraph(frontier=args.frontier)
    caps = diag.BuildCaps(partition_cap=args.cap_partition)
    gamma, log = diag.run_stage_schedule(stages, gamma, caps)
    payload = {
        "graph": gamma.to_json_obj(),
        "log": [r.to_json_obj() for r in log],
    }
    out.emit(json.dumps(payload, indent=2), payload)
    return SUCCESS


def _cmd_oracle(args, out: _Out, budget: Budget) -> int:
    op = args.oracle_op
    if op == "homog":
        c = _load_coloring(args.file)
        hit = oracle.find_homogeneous_naive(c, args.color, args.size)
        if hit is None:
            out.emit("absent", {"result": None})
            return NEGATIVE
        out.emit(" ".join(map(str, hit)), {"result": list(hit)})
        return SUCCESS
    if op == "max-transitive":
        c = _load_coloring(args.file)
        s = oracle.max_transitive_naive(c)
        out.emit(" ".join(map(str, s)), {"result": list(s)})
        return SUCCESS
    if op == "max-independent":
        g = _load_graph(args.file, args.format)
        s = oracle.max_independent_naive(g)
        out.emit(" ".join(map(str, s)), {"result": list(s)})
        return SUCCESS
    if op == "chromatic":
        g = _load_graph(args.file, args.format)
        chi = oracle.chromatic_number_naive(g)
        out.emit(str(chi), {"result": chi})
        return SUCCESS
    if op == "search-r3l":
        g = oracle.search_triangle_free_naive(args.vertices, args.bound)
        if g is None:
            out.emit("certified-absent", {"result": None})
            return NEGATIVE
        out.emit(
            "exists\n" + gadgets.graph_to_text(g).rstrip(),
            {"result": gadgets.graph_to_json_obj(g)},
        )
        return SUCCESS
    if op == "transitive-triangle":
        d = _load_digraph(args.file, args.format)
        tri = oracle.find_transitive_triangle_naive(d)
        if tri is None:
            out.emit("absent", {"result": None})
            return NEGATIVE
        out.emit(" ".join(map(str, tri)), {"result": list(tri)})
        return SUCCESS
    raise InputError(f"unknown oracle op {op!r}")


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ramsey-forge",
        description="Exact finite-window Ramsey combinatorics toolbox",
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="accepted for reproducibility; all subcommands are deterministic")
    p.add_argument("--threads", type=int, default=1, help="reserved; searches currently run single-threaded")
    sub = p.add_subparsers(dest="command", required=True)

    def coloring_cmd(name: str, handler, help_: str):
        q = sub.add_parser(name, help=help_)
        q.add_argument("--file", required=True)
        q.set_defaults(handler=handler)
        return q

    q = coloring_cmd("homog", _cmd_homog, "exhaustive homogeneous-set search")
    q.add_argument("--color", type=int, required=True)
    q.add_argument("--size", type=int, required=True)

    q = coloring_cmd("validate-brt", _cmd_validate_brt, "check a bounded pair/triple instance")
    q.add_argument("--l", dest="bound", type=int, required=True)

    q = coloring_cmd("encode-stable", _cmd_encode_stable, "re-color so color 1 stays bounded")
    q.add_argument("--l", dest="bound", type=int, required=True)
    q.add_argument("--out")

    coloring_cmd("coh-family", _cmd_coh_family, "tail sets of a coloring")
    coloring_cmd("em-max-transitive", _cmd_em_max_transitive, "maximum transitive subset")

    q = coloring_cmd("brt22-solve", _cmd_brt22_solve, "color-0 homogeneous set via the transitive pipeline")
    q.add_argument("--l", dest="bound", type=int, required=True)

    gadget = sub.add_parser("gadget", help="graph gadgets").add_subparsers(
        dest="gadget_op", required=True
    )

    q = gadget.add_parser("budget", help="survivor budget arithmetic")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--l", dest="bound", type=int, required=True)
    q.set_defaults(handler=_cmd_gadget_budget)

    q = gadget.add_parser("check-digraph", help="transitive triangles and independence")
    q.add_argument("--file", required=True)
    q.add_argument("--format", choices=["edgelist", "json"], default="edgelist")
    q.set_defaults(handler=_cmd_gadget_check_digraph)

    q = gadget.add_parser("search-r3l", help="triangle-free graph with bounded independence")
    q.add_argument("--v", dest="vertices", type=int, required=True)
    q.add_argument("--l", dest="bound", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(handler=_cmd_gadget_search)

    q = gadget.add_parser("mycielski", help="Mycielski step")
    q.add_argument("--file", required=True)
    q.add_argument("--format", choices=["edgelist", "json"], default="edgelist")
    q.add_argument("--out")
    q.set_defaults(handler=_cmd_gadget_mycielski)

    q = gadget.add_parser("chromatic", help="exact chromatic number")
    q.add_argument("--file", required=True)
    q.add_argument("--format", choices=["edgelist", "json"], default="edgelist")
    q.set_defaults(handler=_cmd_gadget_chromatic)

    q = gadget.add_parser("instance", help="bounded pair instance from a digraph")
    q.add_argument("--digraph", required=True)
    q.add_argument("--approx", required=True)
    q.add_argument("--n", dest="window", type=int, required=True)
    q.add_argument("--format", choices=["edgelist", "json"], default="edgelist")
    q.add_argument("--out-limit")
    q.add_argument("--out-staged")
    q.set_defaults(handler=_cmd_gadget_instance)

    dg = sub.add_parser("diag", help="diagonalization simulator").add_subparsers(
        dest="diag_op", required=True
    )

    def diag_cmd(name: str, handler, help_: str):
        q = dg.add_parser(name, help=help_)
        q.add_argument("--cap-partition", type=int, default=6)
        q.add_argument("--frontier", type=int, default=0)
        q.set_defaults(handler=handler)
        return q

    for name, handler, help_ in (
        ("build-tree", _cmd_diag_build_tree, "build the question tree"),
        ("trace", _cmd_diag_trace, "build and trace to a verdict"),
    ):
        q = diag_cmd(name, handler, help_)
        q.add_argument("--coloring", required=True)
        q.add_argument("--condition", required=True)
        q.add_argument("--machines", required=True)
        q.add_argument("--gk", type=int, required=True)
        if name == "trace":
            q.add_argument("--tie", choices=["least", "greatest"], default="least")

    q = diag_cmd("run-stages", _cmd_diag_run_stages, "replay a stage schedule")
    q.add_argument("--schedule", required=True)

    orc = sub.add_parser("oracle", help="naive reference implementations").add_subparsers(
        dest="oracle_op", required=True
    )
    for name in ("homog", "max-transitive"):
        q = orc.add_parser(name)
        q.add_argument("--file", required=True)
        if name == "homog":
            q.add_argument("--color", type=int, required=True)
            q.add_argument("--size", type=int, required=True)
        q.set_defaults(handler=_cmd_oracle)
    for name in ("max-independent", "chromatic", "transitive-triangle"):
        q = orc.add_parser(name)
        q.add_argument("--file", required=True)
        q.add_argument("--format", choices=["edgelist", "json"], default="edgelist")
        q.set_defaults(handler=_cmd_oracle)
    q = orc.add_parser("search-r3l")
    q.add_argument("--v", dest="vertices", type=int, required=True)
    q.add_argument("--l", dest="bound", type=int, required=True)
    q.set_defaults(handler=_cmd_oracle)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.json)
    try:
        budget = Budget.from_env()
        return args.handler(args, out, budget)
    except BudgetExceededError as exc:
        out.error("budget", str(exc))
        return EXHAUSTED
    except InputError as exc:
        out.error("input", str(exc))
        return BAD_INPUT
    except RamseyForgeError as exc:
        out.error("internal", str(exc))
        return BAD_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
