"""Command-line surface for the toolkit.

One command per invocation.  Exit codes: 0 = property holds / operation
succeeded, 1 = property fails / no solution at the given bound (the report
carries a machine-checkable witness when one exists), 2 = input error
(malformed JSON, schema violation, unknown fixture).

Inputs are JSON documents (see ``jsonio``) or compiled-in fixtures addressed
as ``fixture:<name>``.  Every run emits a report: a human-readable summary by
default, or a deterministic JSON document with ``--json``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time

from .apt import (Apt, AptError, RegularTree, apt_compose, apt_emptiness,
                  apt_run_regular_tree)
from .arena import Arena, ArenaError, Lasso, validate_arena
from .equilibria import Verdict, Witness
from .esl import EslError, alternation_depth, build_solution_formula, \
    esl_eval_bounded, pretty
from .fixtures import FIXTURES, load_fixture
from .jsonio import JsonError, encode_val, load_path, to_json
from .lattice import Lattice, LatticeError, validate_lattice
from .latticed import (Ldbw, LatticedError, LatticedGame, achievable_values,
                       can_ensure, check_latticed_nash,
                       latticed_synthesize_bounded, play_value)
from .ltl import LtlError, LtlFormula
from .strategy import Profile, StrategyError, outcome
from .synthesis import CONCEPTS, SynthesisError, SynthesisInstance, \
    synthesize_bounded

INPUT_ERRORS = (JsonError, ArenaError, LatticeError, LatticedError, AptError,
                EslError, LtlError, StrategyError, SynthesisError, OSError)


class CliInputError(ValueError):
    pass


# -- input loading ------------------------------------------------------------


def _load(ref: str, kinds: tuple, what: str, digests: dict):
    """Load ``fixture:<name>`` or a JSON file path and type-check it."""
    if ref.startswith("fixture:"):
        name = ref[len("fixture:"):]
        if name not in FIXTURES:
            raise CliInputError(
                f"unknown fixture {name!r}; available: "
                f"{', '.join(sorted(FIXTURES))}")
        value = load_fixture(name)
        digests[ref] = "fixture"
    else:
        with open(ref, "rb") as fh:
            digests[ref] = hashlib.sha256(fh.read()).hexdigest()
        value = load_path(ref)
    if not isinstance(value, kinds):
        raise CliInputError(
            f"{ref} is not a valid {what} document "
            f"(got {type(value).__name__})")
    return value


def _load_ltl_objectives(ref: str, digests: dict) -> tuple:
    value = _load(ref, (tuple,), "objectives", digests)
    if not all(isinstance(f, LtlFormula) for f in value):
        raise CliInputError(f"{ref} does not hold LTL objectives")
    return value


def _default_objectives(arena_ref: str) -> str:
    """The spec'd convention: a fixture arena may carry companion
    objectives under the name ``<arena>-objectives``."""
    if arena_ref.startswith("fixture:"):
        candidate = arena_ref[len("fixture:"):] + "-objectives"
        if candidate in FIXTURES:
            return "fixture:" + candidate
    raise CliInputError(
        "--objectives is required (no companion fixture found for "
        f"{arena_ref!r})")


def _resolve_element(lat: Lattice, text: str):
    """Resolve a lattice element given on the command line, by display
    string first and JSON-encoded value second."""
    matches = [e for e in lat.elements if str(e) == text]
    if len(matches) == 1:
        return matches[0]
    try:
        from .jsonio import decode_val
        value = decode_val(json.loads(text))
    except (ValueError, JsonError):
        value = None
    if value is not None and value in lat.elements:
        return value
    raise CliInputError(
        f"{text!r} is not an element of the lattice; elements: "
        f"{', '.join(str(e) for e in lat.elements)}")


# -- report plumbing ----------------------------------------------------------


def _lasso_doc(lasso: Lasso, arena: Arena | None = None) -> dict:
    doc = {
        "prefix": [{"vertex": encode_val(p.vertex),
                    "joint": [encode_val(a) for a in p.joint]}
                   for p in lasso.prefix],
        "cycle": [{"vertex": encode_val(p.vertex),
                   "joint": [encode_val(a) for a in p.joint]}
                  for p in lasso.cycle],
    }
    if arena is not None:
        word = lasso.word(arena)
        doc["word"] = {
            "prefix": [sorted(letter) for letter in word.prefix],
            "cycle": [sorted(letter) for letter in word.cycle],
        }
    return doc


def _witness_doc(w: Witness, arena: Arena) -> dict:
    doc = {"kind": w.kind, "deviator": w.deviator,
           "history": [encode_val(v) for v in w.history.vertices]}
    if w.deviation is not None:
        doc["deviation"] = _lasso_doc(w.deviation, arena)
    if w.adherent is not None:
        doc["adherent"] = _lasso_doc(w.adherent, arena)
    if w.divergence is not None:
        doc["divergence"] = encode_val(w.divergence)
    return doc


class Report:
    """Collects the run report and prints it once at the end."""

    def __init__(self, args):
        self.command = " ".join(args.argv)
        self.machine = args.json
        self.digests = {}
        self.payload = {}
        self.lines = []
        self.start = time.monotonic()

    def say(self, line: str):
        self.lines.append(line)

    def emit(self, exit_code: int) -> int:
        duration = round(time.monotonic() - self.start, 3)
        if self.machine:
            doc = {"command": self.command, "inputs": self.digests,
                   "exit_code": exit_code, "duration_s": duration,
                   **self.payload}
            print(json.dumps(doc, indent=2, sort_keys=True, default=str))
        else:
            for line in self.lines:
                print(line)
            print(f"[exit {exit_code}, {duration}s]")
        return exit_code


# -- subcommands --------------------------------------------------------------


def _cmd_validate(args, rep: Report) -> int:
    problems = []
    checked = []
    if args.arena:
        arena = _load(args.arena, (Arena,), "arena", rep.digests)
        problems.extend(str(v) for v in validate_arena(arena))
        checked.append("arena")
        if args.profile:
            profile = _load(args.profile, (Profile,), "profile", rep.digests)
            if len(profile.strategies) != arena.n_players:
                problems.append("profile has wrong number of players")
            checked.append("profile")
    elif args.profile:
        raise CliInputError("--profile requires --arena")
    if args.lattice:
        lat = _load(args.lattice, (Lattice,), "lattice", rep.digests)
        problems.extend(str(v) for v in validate_lattice(lat))
        checked.append("lattice")
    if not checked:
        raise CliInputError("nothing to validate: give --arena and/or "
                            "--lattice (and optionally --profile)")
    rep.payload["checked"] = checked
    rep.payload["problems"] = problems
    for p in problems:
        rep.say(f"problem: {p}")
    rep.say("valid" if not problems else f"{len(problems)} problem(s)")
    return 0 if not problems else 1


def _cmd_outcome(args, rep: Report) -> int:
    arena = _load(args.arena, (Arena,), "arena", rep.digests)
    profile = _load(args.profile, (Profile,), "profile", rep.digests)
    lasso = outcome(arena, profile)
    rep.payload["outcome"] = _lasso_doc(lasso, arena)
    rep.say("outcome vertices: " + " ".join(
        [str(p.vertex) for p in lasso.prefix] + ["("] +
        [str(p.vertex) for p in lasso.cycle] + [")^w"]))
    if args.objectives:
        objectives = _load_ltl_objectives(args.objectives, rep.digests)
        from .equilibria import agent_payoff
        payoffs = [agent_payoff(arena, profile, phi) for phi in objectives]
        rep.payload["payoffs"] = payoffs
        for i, (phi, sat) in enumerate(zip(objectives, payoffs)):
            rep.say(f"player {i}: {phi} -> {'sat' if sat else 'unsat'}")
    return 0


def _cmd_check(args, rep: Report) -> int:
    arena = _load(args.arena, (Arena,), "arena", rep.digests)
    profile = _load(args.profile, (Profile,), "profile", rep.digests)
    obj_ref = args.objectives or _default_objectives(args.arena)
    objectives = _load_ltl_objectives(obj_ref, rep.digests)
    verdict: Verdict = CONCEPTS[args.concept](arena, objectives, profile)
    rep.payload["concept"] = args.concept
    rep.payload["holds"] = verdict.holds
    if verdict.holds:
        rep.say(f"{args.concept}: holds")
        return 0
    rep.payload["witness"] = _witness_doc(verdict.witness, arena)
    w = verdict.witness
    rep.say(f"{args.concept}: fails; player {w.deviator} profits by "
            f"deviating after history "
            f"{' '.join(str(v) for v in w.history.vertices)}")
    return 1


def _cmd_synthesize(args, rep: Report) -> int:
    arena = _load(args.arena, (Arena,), "arena", rep.digests)
    obj_ref = args.objectives or _default_objectives(args.arena)
    objectives = _load_ltl_objectives(obj_ref, rep.digests)
    instance = SynthesisInstance(arena=arena, objectives=objectives,
                                 concept=args.concept,
                                 memory_bound=args.memory)
    result = synthesize_bounded(instance)
    rep.payload["concept"] = args.concept
    rep.payload["memory_bound"] = args.memory
    if result is None:
        rep.payload["solution"] = None
        rep.say(f"no solution with per-player memory <= {args.memory}")
        return 1
    rep.payload["solution"] = to_json(result.profile)
    rep.payload["certified"] = result.certified
    rep.payload["note"] = result.note
    rep.payload["outcome"] = _lasso_doc(outcome(arena, result.profile), arena)
    rep.say(f"solution found ({result.note})")
    return 0


def _cmd_esl_eval(args, rep: Report) -> int:
    arena = _load(args.arena, (Arena,), "arena", rep.digests)
    obj_ref = args.objectives or _default_objectives(args.arena)
    objectives = _load_ltl_objectives(obj_ref, rep.digests)
    psi, phi = build_solution_formula(args.concept, objectives)
    value = esl_eval_bounded(phi, arena, {}, args.memory, args.history_bound)
    rep.payload["concept"] = args.concept
    rep.payload["formula"] = pretty(phi)
    rep.payload["alternation_depth"] = alternation_depth(phi)
    rep.payload["memory_bound"] = args.memory
    rep.payload["history_bound"] = args.history_bound
    rep.payload["value"] = value
    rep.say(pretty(phi))
    rep.say(f"bounded evaluation (memory {args.memory}, histories "
            f"<= {args.history_bound}): {value}")
    return 0 if value else 1


def _cmd_apt_run(args, rep: Report) -> int:
    apt = _load(args.apt, (Apt,), "apt", rep.digests)
    tree = _load(args.tree, (RegularTree,), "rtree", rep.digests)
    accepted = apt_run_regular_tree(apt, tree)
    rep.payload["accepted"] = accepted
    rep.say("accepted" if accepted else "rejected")
    return 0 if accepted else 1


def _cmd_apt_empty(args, rep: Report) -> int:
    apt = _load(args.apt, (Apt,), "apt", rep.digests)
    witness = apt_emptiness(apt, state_ceiling=args.state_ceiling)
    if witness is None:
        rep.payload["empty"] = True
        rep.say("language is empty")
        return 0
    rep.payload["empty"] = False
    rep.payload["witness"] = to_json(witness)
    rep.say("language is nonempty; report carries an accepted regular tree")
    return 1


def _cmd_apt_compose(args, rep: Report) -> int:
    operands = [_load(ref, (Apt,), "apt", rep.digests) for ref in args.apt]
    result = apt_compose(args.kind, operands, component=args.component,
                         state_ceiling=args.state_ceiling)
    rep.payload["result"] = to_json(result)
    rep.say(f"{args.kind}: result has {len(result.states)} states")
    if not args.json:
        print(json.dumps(rep.payload["result"], indent=2, sort_keys=True))
    return 0


def _cmd_lattice_validate(args, rep: Report) -> int:
    lat = _load(args.lattice, (Lattice,), "lattice", rep.digests)
    problems = [str(v) for v in validate_lattice(lat)]
    rep.payload["problems"] = problems
    for p in problems:
        rep.say(f"problem: {p}")
    rep.say("valid De Morgan lattice" if not problems
            else f"{len(problems)} law violation(s)")
    return 0 if not problems else 1


def _parse_vertex_list(game: LatticedGame, text: str, what: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        matches = [v for v in game.vertices if str(v) == tok]
        if len(matches) != 1:
            raise CliInputError(f"{what}: unknown vertex {tok!r}")
        out.append(matches[0])
    return out


def _cmd_lattice_value(args, rep: Report) -> int:
    game = _load(args.game, (LatticedGame,), "lgame", rep.digests)
    prefix = _parse_vertex_list(game, args.prefix, "--prefix") \
        if args.prefix else []
    cycle = _parse_vertex_list(game, args.cycle, "--cycle")
    value = play_value(game, prefix, cycle)
    rep.payload["value"] = encode_val(value)
    rep.say(f"play value: {value}")
    return 0


def _cmd_lattice_ensure(args, rep: Report) -> int:
    game = _load(args.game, (LatticedGame,), "lgame", rep.digests)
    threshold = _resolve_element(game.lattice, args.threshold)
    ok, strat = can_ensure(game, threshold)
    rep.payload["threshold"] = encode_val(threshold)
    rep.payload["ensured"] = ok
    if ok:
        if strat is not None:
            rep.payload["strategy_moves"] = len(strat.moves)
        rep.say(f"value >= {threshold} is ensured (certified witness "
                "strategy extracted)")
        return 0
    rep.say(f"value >= {threshold} cannot be ensured")
    return 1


def _cmd_lattice_achievable(args, rep: Report) -> int:
    game = _load(args.game, (LatticedGame,), "lgame", rep.digests)
    values = achievable_values(game)
    rep.payload["achievable"] = [encode_val(v) for v in values]
    rep.say("maximal achievable values: "
            + ", ".join(str(v) for v in values))
    return 0


def _load_ldbw_objectives(refs, digests) -> tuple:
    return tuple(_load(ref, (Ldbw,), "ldbw", digests) for ref in refs)


def _cmd_lattice_check_nash(args, rep: Report) -> int:
    arena = _load(args.arena, (Arena,), "arena", rep.digests)
    profile = _load(args.profile, (Profile,), "profile", rep.digests)
    objectives = _load_ldbw_objectives(args.objectives, rep.digests)
    verdict = check_latticed_nash(arena, objectives, profile)
    rep.payload["holds"] = verdict.holds
    rep.payload["payoffs"] = [encode_val(p) for p in verdict.payoffs]
    rep.say("payoffs: " + ", ".join(
        f"player {i}: {p}" for i, p in enumerate(verdict.payoffs)))
    if verdict.holds:
        rep.say("latticed nash: holds")
        return 0
    rep.payload["deviator"] = verdict.deviator
    rep.payload["element"] = encode_val(verdict.element)
    rep.payload["deviation"] = _lasso_doc(verdict.deviation)
    rep.say(f"latticed nash: fails; player {verdict.deviator} can push "
            f"their payoff up to cover {verdict.element}")
    return 1


def _cmd_lattice_synthesize(args, rep: Report) -> int:
    arena = _load(args.arena, (Arena,), "arena", rep.digests)
    objectives = _load_ldbw_objectives(args.objectives, rep.digests)
    threshold = _resolve_element(objectives[0].lattice, args.threshold)
    result = latticed_synthesize_bounded(arena, objectives, threshold,
                                         args.memory)
    rep.payload["threshold"] = encode_val(threshold)
    rep.payload["memory_bound"] = args.memory
    if result is None:
        rep.payload["solution"] = None
        rep.say(f"no solution with per-player memory <= {args.memory}")
        return 1
    rep.payload["solution"] = to_json(result)
    rep.say("solution found (re-checked before emission)")
    return 0


# -- argument parsing ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ratsynth",
        description="Rational verification and synthesis for concurrent "
                    "multiplayer games with LTL and lattice-valued "
                    "objectives.")
    top.add_argument("--json", action="store_true",
                     help="emit a machine-readable JSON report")
    top.add_argument("--seed", type=int, default=None,
                     help="seed the process RNG (reproducibility aid for "
                          "randomized drivers)")
    sub = top.add_subparsers(dest="cmd", required=True)

    # the global flags are also accepted after the subcommand; SUPPRESS
    # keeps the subparser from clobbering a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    def add(name, fn, help, parent=None):
        p = (parent or sub).add_parser(name, help=help, parents=[common])
        p.set_defaults(fn=fn)
        return p

    p = add("validate", _cmd_validate,
            "validate an arena / profile / lattice document")
    p.add_argument("--arena")
    p.add_argument("--profile")
    p.add_argument("--lattice")

    p = add("outcome", _cmd_outcome, "compute the outcome lasso of a profile")
    p.add_argument("--arena", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--objectives")

    p = add("check", _cmd_check,
            "check a profile against a solution concept")
    p.add_argument("--concept", required=True, choices=sorted(CONCEPTS))
    p.add_argument("--arena", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--objectives")

    p = add("synthesize", _cmd_synthesize,
            "bounded rational synthesis (system objective first)")
    p.add_argument("--concept", required=True, choices=sorted(CONCEPTS))
    p.add_argument("--arena", required=True)
    p.add_argument("--objectives")
    p.add_argument("--memory", type=int, default=2)

    pesl = sub.add_parser("esl", help="strategy-logic operations")
    esub = pesl.add_subparsers(dest="esl_cmd", required=True)
    p = esub.add_parser("eval", parents=[common],
                        help="evaluate the closed solution formula under "
                             "explicit bounds")
    p.set_defaults(fn=_cmd_esl_eval)
    p.add_argument("--concept", required=True, choices=sorted(CONCEPTS))
    p.add_argument("--arena", required=True)
    p.add_argument("--objectives")
    p.add_argument("--memory", type=int, default=2)
    p.add_argument("--history-bound", type=int, default=3)

    papt = sub.add_parser("apt", help="alternating parity tree automata")
    asub = papt.add_subparsers(dest="apt_cmd", required=True)
    p = asub.add_parser("run", parents=[common],
                        help="membership of a regular tree")
    p.set_defaults(fn=_cmd_apt_run)
    p.add_argument("--apt", required=True)
    p.add_argument("--tree", required=True)
    p = asub.add_parser("empty", parents=[common],
                        help="emptiness with witness extraction")
    p.set_defaults(fn=_cmd_apt_empty)
    p.add_argument("--apt", required=True)
    p.add_argument("--state-ceiling", type=int, default=20000)
    p = asub.add_parser("compose", parents=[common],
                        help="boolean/projection combinators")
    p.set_defaults(fn=_cmd_apt_compose)
    p.add_argument("--kind", required=True,
                   choices=["complement", "union", "intersection", "project"])
    p.add_argument("--apt", required=True, action="append",
                   help="operand automaton (repeat for binary kinds)")
    p.add_argument("--component", type=int, default=None,
                   help="tuple-label component kept by 'project'")
    p.add_argument("--state-ceiling", type=int, default=20000)

    plat = sub.add_parser("lattice", help="lattice-valued games")
    lsub = plat.add_subparsers(dest="lattice_cmd", required=True)
    p = lsub.add_parser("validate", parents=[common],
                        help="check the De Morgan lattice laws")
    p.set_defaults(fn=_cmd_lattice_validate)
    p.add_argument("--lattice", required=True)
    p = lsub.add_parser("value", parents=[common],
                        help="value of a lasso play in a game")
    p.set_defaults(fn=_cmd_lattice_value)
    p.add_argument("--game", required=True)
    p.add_argument("--prefix", default="",
                   help="comma-separated vertices before the cycle")
    p.add_argument("--cycle", required=True,
                   help="comma-separated vertices of the repeated cycle")
    p = lsub.add_parser("ensure", parents=[common],
                        help="can the maximizer ensure value >= threshold?")
    p.set_defaults(fn=_cmd_lattice_ensure)
    p.add_argument("--game", required=True)
    p.add_argument("--threshold", required=True)
    p = lsub.add_parser("achievable", parents=[common],
                        help="maximal ensurable values (antichain)")
    p.set_defaults(fn=_cmd_lattice_achievable)
    p.add_argument("--game", required=True)
    p = lsub.add_parser("check-nash", parents=[common],
                        help="latticed Nash check with automatic payoffs")
    p.set_defaults(fn=_cmd_lattice_check_nash)
    p.add_argument("--arena", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--objectives", required=True, nargs="+",
                   help="one lattice-valued word automaton per player")
    p = lsub.add_parser("synthesize", parents=[common],
                        help="bounded latticed rational synthesis (Nash)")
    p.set_defaults(fn=_cmd_lattice_synthesize)
    p.add_argument("--arena", required=True)
    p.add_argument("--objectives", required=True, nargs="+")
    p.add_argument("--threshold", required=True)
    p.add_argument("--memory", type=int, default=2)

    return top


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    args.argv = ["ratsynth"] + argv
    if args.seed is not None:
        random.seed(args.seed)
    rep = Report(args)
    try:
        code = args.fn(args, rep)
    except (CliInputError, *INPUT_ERRORS) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return rep.emit(code)


if __name__ == "__main__":
    sys.exit(main())
