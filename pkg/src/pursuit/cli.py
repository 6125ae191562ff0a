"""Command-line entry point: `pursuit {bound,simulate,play,generate}`."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import IO, Sequence

from .bounds import BoundReport, best_bound_report, theorem1_bound, theorem_main2_bound
from .cover import PoolLimits, RetractCatalog
from .decomposition import (
    TreeDecomposition,
    clique_tree,
    grid_path_decomposition,
    pairwise_clique_intersections,
)
from .errors import (
    BoundNotFoundError,
    IllegalMoveError,
    InvalidInputError,
    PursuitError,
    ResourceBudgetError,
    SoundnessError,
    UncoverableError,
)
from .formats import read_gr, read_td, write_gr
from .generators import generate, grid_shape
from .graph import Graph
from .robbers import POLICIES, TableRobber
from .sim import (
    CliqueTreeController,
    LeapController,
    RelayController,
    StopGame,
    TableController,
    capture_time_bound,
    reentry_violations,
    render_board,
    simulate,
)
from .solver import DEFAULT_STATE_BUDGET, solve_k_cop_game
from .treewidth import treewidth_exact

log = logging.getLogger("pursuit")

EXIT_OK, EXIT_INCOMPLETE, EXIT_INPUT, EXIT_BUDGET, EXIT_SOUNDNESS = 0, 1, 2, 3, 4


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pursuit", description="Cops and robbers bounds and simulations.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--gr", type=Path, help="graph in PACE .gr format")
    source.add_argument("--gen", metavar="FAMILY:ARGS", help="generated graph, e.g. grid:4 or ktree:2,10")
    common.add_argument("--td", type=Path, action="append", default=[], help="tree decomposition in PACE .td format (repeatable)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-states", type=_positive, default=DEFAULT_STATE_BUDGET, help="game-solver state budget")
    common.add_argument("--budget-pool", type=_positive, default=PoolLimits.max_pool, help="maximum retract pool size per bag")
    common.add_argument("--out", type=Path, help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    sub.add_parser("bound", parents=[common], help="report every cop-number bound")

    sim_opts = argparse.ArgumentParser(add_help=False)
    sim_opts.add_argument("--strategy", choices=("thm1", "thm-i", "thm-main2"), default="thm1")
    sim_opts.add_argument("--cops", type=_positive, help="play N cops with the solver's strategy instead")
    sim_opts.add_argument("--max-rounds", type=_positive, default=1000)

    simp = sub.add_parser("simulate", parents=[common, sim_opts], help="run a cop controller against a robber policy")
    simp.add_argument("--robber", choices=("optimal", "greedy", "random", "still"), default="optimal")
    simp.add_argument("--trace", type=Path, help="write the JSON-lines trace here")

    sub.add_parser("play", parents=[common, sim_opts], help="play the robber interactively")

    gen = sub.add_parser("generate", help="write a generated graph as .gr")
    gen.add_argument("--gen", required=True, metavar="FAMILY:ARGS")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path)
    return parser


def load_graph(args: argparse.Namespace) -> Graph:
    if args.gen:
        return generate(args.gen, args.seed)
    try:
        g = read_gr(args.gr)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {args.gr}: {exc}") from exc
    return g if g.name else dataclasses.replace(g, name=args.gr.stem)


def candidate_decompositions(g: Graph, args: argparse.Namespace) -> list[TreeDecomposition]:
    """User files first, then the treewidth witness, a clique tree, and the grid path layout."""
    out = []
    for path in args.td:
        try:
            out.append(read_td(path, g))
        except OSError as exc:
            raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    out.append(treewidth_exact(g).witness)
    chordal = clique_tree(g)
    if chordal is not None:
        out.append(chordal)
    shape = grid_shape(g)
    if shape is not None and shape[0] == shape[1] and shape[0] >= 2:
        out.append(grid_path_decomposition(shape[0], g))
    return out


def _limits(args: argparse.Namespace) -> PoolLimits:
    return PoolLimits(max_pool=args.budget_pool, state_budget=args.budget_states)


def _emit(doc: dict, text: str, args: argparse.Namespace, out: IO[str]) -> None:
    body = json.dumps(doc, indent=2, sort_keys=True) + "\n" if args.format == "json" else text
    if args.out:
        args.out.write_text(body)
    else:
        out.write(body)


def bound_text(doc: dict) -> str:
    lines = [f"graph {doc['graph']['id']}  n={doc['graph']['n']}  m={doc['graph']['m']}"]
    lines.append(f"exact c(G): {doc['exact_c'] if doc['exact_c'] is not None else 'unknown'}")
    for name, value in doc["bounds"].items():
        if isinstance(value, dict) and "value" in value:
            lines.append(f"{name}: {value['value']}")
        elif isinstance(value, dict) and value.get("copwin"):
            lines.append(f"{name}: cop-win")
    lines.append("soundness: " + ("ok" if doc["soundness_ok"] else "VIOLATED"))
    return "\n".join(lines) + "\n"


def cmd_bound(args: argparse.Namespace, out: IO[str]) -> int:
    g = load_graph(args)
    report: BoundReport = best_bound_report(
        g, candidate_decompositions(g, args), _limits(args), state_budget=args.budget_states, check=False
    )
    if report.thm1 is not None:
        report.capt_bound = capture_time_bound(g, report.thm1.decomposition, report.thm1.covers).applicable
    doc = report.to_json()
    _emit(doc, bound_text(doc), args, out)
    return EXIT_OK if doc["soundness_ok"] else EXIT_SOUNDNESS


def build_controller(g: Graph, args: argparse.Namespace):
    """(controller, decomposition or None) for the requested strategy."""
    if args.cops:
        return TableController(g, args.cops, solve_k_cop_game(g, args.cops, args.budget_states)), None
    decomps = candidate_decompositions(g, args)
    catalog = RetractCatalog(g, _limits(args))
    if args.strategy == "thm-i":
        t = clique_tree(g)
        if t is None:
            raise InvalidInputError("graph is not chordal; no clique tree for the one-cop strategy")
        return CliqueTreeController(g, t), t
    if args.strategy == "thm-main2":
        usable = [t for t in decomps if pairwise_clique_intersections(g, t)]
        if not usable:
            raise InvalidInputError("no decomposition whose adjacent bags meet in cliques")
        best = min((theorem_main2_bound(g, t, catalog=catalog) for t in usable), key=lambda b: b.value)
        return RelayController(g, best.decomposition, best.covers), best.decomposition
    best = min((theorem1_bound(g, t, catalog=catalog) for t in decomps), key=lambda b: b.value)
    return LeapController(g, best.decomposition, best.covers), best.decomposition


def _robber(g: Graph, name: str, cops: int, budget: int):
    if name == "optimal":
        return TableRobber(solve_k_cop_game(g, cops, budget))
    return POLICIES[name]()


def cmd_simulate(args: argparse.Namespace, out: IO[str]) -> int:
    g = load_graph(args)
    controller, t = build_controller(g, args)
    robber = _robber(g, args.robber, controller.cop_count, args.budget_states)
    trace = simulate(g, controller, robber, args.max_rounds, args.seed)
    bound = None
    if isinstance(controller, LeapController):
        bound = capture_time_bound(g, t, controller.covers)
    doc = {
        "graph": {"id": g.name, "n": g.n, "m": g.m},
        "strategy": controller.name,
        "cops": controller.cop_count,
        "robber": robber.name,
        "seed": args.seed,
        "outcome": trace.outcome,
        "capture_round": trace.capture_round,
        "capture_time_bound": None if bound is None else bound.to_json(),
        "within_bound": None
        if bound is None
        else trace.captured and trace.capture_round <= bound.applicable,
        "reentry_violations": [] if t is None else reentry_violations(trace, t),
    }
    if args.trace:
        args.trace.write_text(trace.to_jsonl())
    text = (
        f"{controller.name} with {controller.cop_count} cops vs {robber.name} robber: {trace.outcome}"
        + (f" in round {trace.capture_round}" if trace.captured else "")
        + (f" (bound {bound.applicable})" if bound is not None else "")
        + "\n"
    )
    _emit(doc, text, args, out)
    if doc["within_bound"] is False and trace.captured or doc["reentry_violations"]:
        return EXIT_SOUNDNESS
    return EXIT_OK


class KeyboardRobber:
    """The human player: reads vertex ids from a stream, shows the position on another."""

    name = "human"

    def __init__(self, inp: IO[str], out: IO[str]) -> None:
        self.inp, self.out = inp, out

    def _ask(self, options: Sequence[int], prompt: str, stay: int | None = None) -> int:
        hint = " (p = pass, q = quit): " if stay is not None else " (q = quit): "
        while True:
            self.out.write(f"{prompt} {list(options)}{hint}")
            self.out.flush()
            line = self.inp.readline()
            if not line:
                self.out.write("\n")
                raise StopGame
            choice = line.strip().lower()
            if choice in ("q", "quit"):
                raise StopGame
            if choice in ("", "p", "pass") and stay is not None:
                return stay
            try:
                v = int(choice)
            except ValueError:
                self.out.write(f"not a vertex: {choice!r}\n")
                continue
            if v in options:
                return v
            self.out.write(f"{v} is not a legal choice\n")

    def place(self, g, cops, rng):
        self.out.write(render_board(g, cops, -1) + "\n")
        return self._ask(list(g.vertices), "start vertex")

    def move(self, g, cops, robber, rng):
        self.out.write(render_board(g, cops, robber) + "\n")
        return self._ask(list(g.closed_nbhd[robber]), "move to", stay=robber)


def cmd_play(args: argparse.Namespace, out: IO[str], inp: IO[str] = sys.stdin) -> int:
    g = load_graph(args)
    controller, _ = build_controller(g, args)
    human = KeyboardRobber(inp, out)
    trace = simulate(g, controller, human, args.max_rounds, args.seed)
    last = trace.rounds[-1] if trace.rounds else None
    if last is not None:
        out.write(render_board(g, last.cops, last.robber) + "\n")
    out.write(f"{trace.outcome}" + (f" in round {trace.capture_round}" if trace.captured else "") + "\n")
    if args.out:
        args.out.write_text(trace.to_jsonl())
    return EXIT_OK if trace.outcome != "incomplete" else EXIT_INCOMPLETE


def cmd_generate(args: argparse.Namespace, out: IO[str]) -> int:
    g = generate(args.gen, args.seed)
    write_gr(g, args.out if args.out else out)
    return EXIT_OK


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (SoundnessError, IllegalMoveError)):
        return EXIT_SOUNDNESS
    if isinstance(exc, (ResourceBudgetError, BoundNotFoundError, UncoverableError)):
        return EXIT_BUDGET
    return EXIT_INPUT


def main(argv: Sequence[str] | None = None, out: IO[str] | None = None, inp: IO[str] | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    handlers = {"bound": cmd_bound, "simulate": cmd_simulate, "generate": cmd_generate}
    try:
        if args.command == "play":
            return cmd_play(args, out, inp or sys.stdin)
        return handlers[args.command](args, out)
    except PursuitError as exc:
        code = exit_code_for(exc)
        doc = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
        sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
