"""Versioned JSON serialization for every document the CLI reads or emits.

Every document carries a ``format`` field ("ratsynth.<kind>/1").  Values
that are not JSON-native (tuples, frozensets) use a small tagged codec so
that loading an emitted document yields an equal Python value.
"""

from __future__ import annotations

import json

from .apt import (Apt, PAnd, PAtom, PFalse, PFormula, POr, PTrue,
                  RegularTree)
from .arena import Arena
from .lattice import Lattice
from .latticed import LatticedGame, Ldbw
from .ltl import LtlFormula, parse as parse_ltl
from .strategy import Profile, Strategy


class JsonError(ValueError):
    pass


FORMATS = {
    "lattice": "ratsynth.lattice/1",
    "arena": "ratsynth.arena/1",
    "strategy": "ratsynth.strategy/1",
    "profile": "ratsynth.profile/1",
    "objectives": "ratsynth.objectives/1",
    "lgame": "ratsynth.lgame/1",
    "ldbw": "ratsynth.ldbw/1",
    "apt": "ratsynth.apt/1",
    "rtree": "ratsynth.rtree/1",
}


# -- value codec -----------------------------------------------------------------


def encode_val(v):
    if isinstance(v, bool) or v is None or isinstance(v, (str, int, float)):
        return v
    if isinstance(v, tuple):
        return {"tuple": [encode_val(x) for x in v]}
    if isinstance(v, frozenset):
        return {"set": sorted((encode_val(x) for x in v), key=repr)}
    if isinstance(v, LtlFormula):
        return {"ltl": str(v)}
    raise JsonError(f"cannot encode value of type {type(v).__name__}")


def decode_val(v):
    if isinstance(v, dict):
        if set(v) == {"tuple"}:
            return tuple(decode_val(x) for x in v["tuple"])
        if set(v) == {"set"}:
            return frozenset(decode_val(x) for x in v["set"])
        if set(v) == {"ltl"}:
            return parse_ltl(v["ltl"])
        raise JsonError(f"unknown tagged value: {sorted(v)}")
    if isinstance(v, list):
        raise JsonError("bare lists are not valid encoded values")
    return v


# -- positive boolean formulas as strings ----------------------------------------


def pformula_to_str(f: PFormula) -> str:
    if isinstance(f, PTrue):
        return "true"
    if isinstance(f, PFalse):
        return "false"
    if isinstance(f, PAtom):
        return "@" + json.dumps(encode_val(f.atom), sort_keys=True,
                                separators=(",", ":"))
    if isinstance(f, PAnd):
        return "(" + " & ".join(pformula_to_str(a) for a in f.args) + ")"
    if isinstance(f, POr):
        return "(" + " | ".join(pformula_to_str(a) for a in f.args) + ")"
    raise JsonError(f"unknown formula node: {f!r}")


def pformula_from_str(text: str) -> PFormula:
    decoder = json.JSONDecoder()
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def peek():
        skip_ws()
        return text[pos] if pos < len(text) else ""

    def parse_primary():
        nonlocal pos
        skip_ws()
        if text.startswith("true", pos):
            pos += 4
            return PTrue()
        if text.startswith("false", pos):
            pos += 5
            return PFalse()
        if peek() == "@":
            pos += 1
            val, end = decoder.raw_decode(text, pos)
            pos = end
            return PAtom(decode_val(val))
        if peek() == "(":
            pos += 1
            f = parse_or()
            if peek() != ")":
                raise JsonError(f"expected ')' at {pos} in formula {text!r}")
            pos += 1
            return f
        raise JsonError(f"cannot parse formula at {pos} in {text!r}")

    def parse_and():
        nonlocal pos
        parts = [parse_primary()]
        while peek() == "&":
            pos += 1
            parts.append(parse_primary())
        return parts[0] if len(parts) == 1 else PAnd(tuple(parts))

    def parse_or():
        nonlocal pos
        parts = [parse_and()]
        while peek() == "|":
            pos += 1
            parts.append(parse_and())
        return parts[0] if len(parts) == 1 else POr(tuple(parts))

    f = parse_or()
    skip_ws()
    if pos != len(text):
        raise JsonError(f"trailing input at {pos} in formula {text!r}")
    return f


# -- per-kind converters ----------------------------------------------------------


def lattice_to_json(lat: Lattice) -> dict:
    return {
        "format": FORMATS["lattice"],
        "elements": list(lat.elements),
        "leq": sorted([a, b] for (a, b) in lat.leq_pairs),
        "neg": dict(sorted(lat.neg_table.items())),
    }


def lattice_from_json(doc: dict) -> Lattice:
    _expect(doc, "lattice")
    return Lattice.from_order(doc["elements"],
                              {tuple(p) for p in doc["leq"]}, doc["neg"])


def arena_to_json(arena: Arena) -> dict:
    return {
        "format": FORMATS["arena"],
        "name": arena.name,
        "vertices": [encode_val(v) for v in arena.vertices],
        "initial": encode_val(arena.initial),
        "n_players": arena.n_players,
        "actions": [[encode_val(a) for a in acts] for acts in arena.actions],
        "available": [
            {"player": p, "vertex": encode_val(v),
             "actions": [encode_val(a) for a in acts]}
            for (p, v), acts in sorted(arena.available.items(), key=repr)],
        "delta": [
            {"from": encode_val(v), "joint": [encode_val(a) for a in joint],
             "to": encode_val(w)}
            for (v, joint), w in sorted(arena.delta.items(), key=repr)],
        "labels": [
            {"vertex": encode_val(v), "props": sorted(props)}
            for v, props in sorted(arena.labels.items(), key=repr)],
        "props": sorted(arena.props),
        "variable_based": arena.variable_based,
    }


def arena_from_json(doc: dict) -> Arena:
    _expect(doc, "arena")
    return Arena(
        name=doc["name"],
        vertices=tuple(decode_val(v) for v in doc["vertices"]),
        initial=decode_val(doc["initial"]),
        n_players=doc["n_players"],
        actions=tuple(tuple(decode_val(a) for a in acts)
                      for acts in doc["actions"]),
        available={(e["player"], decode_val(e["vertex"])):
                   tuple(decode_val(a) for a in e["actions"])
                   for e in doc["available"]},
        delta={(decode_val(e["from"]),
                tuple(decode_val(a) for a in e["joint"])):
               decode_val(e["to"]) for e in doc["delta"]},
        labels={decode_val(e["vertex"]): frozenset(e["props"])
                for e in doc["labels"]},
        props=frozenset(doc["props"]),
        variable_based=doc["variable_based"],
    )


def strategy_to_json(s: Strategy) -> dict:
    return {
        "format": FORMATS["strategy"],
        "owner": s.owner,
        "memory": [encode_val(m) for m in s.memory],
        "initial": encode_val(s.initial_memory),
        "input_kind": s.input_kind,
        "update": [{"mem": encode_val(m), "input": encode_val(i),
                    "to": encode_val(m2)}
                   for (m, i), m2 in sorted(s.update.items(), key=repr)],
        "output": [{"mem": encode_val(m), "action": encode_val(a)}
                   for m, a in sorted(s.output.items(), key=repr)],
    }


def strategy_from_json(doc: dict) -> Strategy:
    _expect(doc, "strategy")
    return Strategy(
        owner=doc["owner"],
        memory=tuple(decode_val(m) for m in doc["memory"]),
        initial_memory=decode_val(doc["initial"]),
        update={(decode_val(e["mem"]), decode_val(e["input"])):
                decode_val(e["to"]) for e in doc["update"]},
        output={decode_val(e["mem"]): decode_val(e["action"])
                for e in doc["output"]},
        input_kind=doc["input_kind"],
    )


def profile_to_json(p: Profile) -> dict:
    return {"format": FORMATS["profile"],
            "strategies": [strategy_to_json(s) for s in p.strategies]}


def profile_from_json(doc: dict) -> Profile:
    _expect(doc, "profile")
    return Profile(tuple(strategy_from_json(d) for d in doc["strategies"]))


def objectives_to_json(objectives) -> dict:
    return {"format": FORMATS["objectives"],
            "formulas": [str(f) for f in objectives]}


def objectives_from_json(doc: dict) -> tuple[LtlFormula, ...]:
    _expect(doc, "objectives")
    return tuple(parse_ltl(s) for s in doc["formulas"])


def lgame_to_json(g: LatticedGame) -> dict:
    return {
        "format": FORMATS["lgame"],
        "lattice": lattice_to_json(g.lattice),
        "vertices": [encode_val(v) for v in g.vertices],
        "vee": sorted((encode_val(v) for v in g.vee), key=repr),
        "initial": encode_val(g.initial),
        "edges": [{"from": encode_val(u), "to": encode_val(v), "value": e}
                  for (u, v), e in sorted(g.edges.items(), key=repr)],
        "accept": [{"vertex": encode_val(v), "value": a}
                   for v, a in sorted(g.accept.items(), key=repr)],
    }


def lgame_from_json(doc: dict) -> LatticedGame:
    _expect(doc, "lgame")
    return LatticedGame(
        lattice=lattice_from_json(doc["lattice"]),
        vertices=tuple(decode_val(v) for v in doc["vertices"]),
        vee=frozenset(decode_val(v) for v in doc["vee"]),
        initial=decode_val(doc["initial"]),
        edges={(decode_val(e["from"]), decode_val(e["to"])): e["value"]
               for e in doc["edges"]},
        accept={decode_val(e["vertex"]): e["value"] for e in doc["accept"]},
    )


def ldbw_to_json(a: Ldbw) -> dict:
    return {
        "format": FORMATS["ldbw"],
        "lattice": lattice_to_json(a.lattice),
        "states": [encode_val(s) for s in a.states],
        "initial": encode_val(a.initial),
        "delta": [{"state": encode_val(q), "letter": encode_val(l),
                   "to": encode_val(q2),
                   "value": a.tvalue.get((q, l), a.lattice.top)}
                  for (q, l), q2 in sorted(a.delta.items(), key=repr)],
        "accept": [{"state": encode_val(q), "value": v}
                   for q, v in sorted(a.accept.items(), key=repr)],
    }


def ldbw_from_json(doc: dict) -> Ldbw:
    _expect(doc, "ldbw")
    delta = {}
    tvalue = {}
    for e in doc["delta"]:
        key = (decode_val(e["state"]), decode_val(e["letter"]))
        delta[key] = decode_val(e["to"])
        tvalue[key] = e["value"]
    return Ldbw(
        lattice=lattice_from_json(doc["lattice"]),
        states=tuple(decode_val(s) for s in doc["states"]),
        initial=decode_val(doc["initial"]),
        delta=delta, tvalue=tvalue,
        accept={decode_val(e["state"]): e["value"] for e in doc["accept"]},
    )


def apt_to_json(a: Apt) -> dict:
    return {
        "format": FORMATS["apt"],
        "alphabet": [encode_val(l) for l in a.alphabet],
        "directions": [encode_val(d) for d in a.directions],
        "states": [encode_val(q) for q in a.states],
        "initial": pformula_to_str(a.initial),
        "delta": [{"state": encode_val(q), "letter": encode_val(l),
                   "formula": pformula_to_str(f)}
                  for (q, l), f in sorted(a.delta.items(), key=repr)],
        "priority": [{"state": encode_val(q), "value": p}
                     for q, p in sorted(a.priority.items(), key=repr)],
    }


def apt_from_json(doc: dict) -> Apt:
    _expect(doc, "apt")
    apt = Apt(
        alphabet=tuple(decode_val(l) for l in doc["alphabet"]),
        directions=tuple(decode_val(d) for d in doc["directions"]),
        states=tuple(decode_val(q) for q in doc["states"]),
        initial=pformula_from_str(doc["initial"]),
        delta={(decode_val(e["state"]), decode_val(e["letter"])):
               pformula_from_str(e["formula"]) for e in doc["delta"]},
        priority={decode_val(e["state"]): e["value"]
                  for e in doc["priority"]},
    )
    apt.validate()
    return apt


def rtree_to_json(t: RegularTree) -> dict:
    return {
        "format": FORMATS["rtree"],
        "states": [encode_val(s) for s in t.states],
        "initial": encode_val(t.initial),
        "succ": [{"state": encode_val(s), "direction": encode_val(d),
                  "to": encode_val(s2)}
                 for (s, d), s2 in sorted(t.succ.items(), key=repr)],
        "label": [{"state": encode_val(s), "letter": encode_val(l)}
                  for s, l in sorted(t.label.items(), key=repr)],
    }


def rtree_from_json(doc: dict) -> RegularTree:
    _expect(doc, "rtree")
    return RegularTree(
        states=tuple(decode_val(s) for s in doc["states"]),
        initial=decode_val(doc["initial"]),
        succ={(decode_val(e["state"]), decode_val(e["direction"])):
              decode_val(e["to"]) for e in doc["succ"]},
        label={decode_val(e["state"]): decode_val(e["letter"])
               for e in doc["label"]},
    )


TO_JSON = {
    Lattice: lattice_to_json,
    Arena: arena_to_json,
    Strategy: strategy_to_json,
    Profile: profile_to_json,
    LatticedGame: lgame_to_json,
    Ldbw: ldbw_to_json,
    Apt: apt_to_json,
    RegularTree: rtree_to_json,
}

FROM_JSON = {
    FORMATS["lattice"]: lattice_from_json,
    FORMATS["arena"]: arena_from_json,
    FORMATS["strategy"]: strategy_from_json,
    FORMATS["profile"]: profile_from_json,
    FORMATS["objectives"]: objectives_from_json,
    FORMATS["lgame"]: lgame_from_json,
    FORMATS["ldbw"]: ldbw_from_json,
    FORMATS["apt"]: apt_from_json,
    FORMATS["rtree"]: rtree_from_json,
}


def _expect(doc, kind):
    if not isinstance(doc, dict):
        raise JsonError(f"expected a JSON object for {kind}")
    got = doc.get("format")
    if got != FORMATS[kind]:
        raise JsonError(f"expected format {FORMATS[kind]!r}, got {got!r}")


def to_json(value) -> dict:
    """Serialize any supported value to its versioned document."""
    fn = TO_JSON.get(type(value))
    if fn is None:
        if isinstance(value, tuple) and all(isinstance(f, LtlFormula)
                                            for f in value):
            return objectives_to_json(value)
        raise JsonError(f"no JSON form for {type(value).__name__}")
    return fn(value)


def from_json(doc: dict):
    """Deserialize any document by its ``format`` field."""
    if not isinstance(doc, dict) or "format" not in doc:
        raise JsonError("document lacks a 'format' field")
    fn = FROM_JSON.get(doc["format"])
    if fn is None:
        raise JsonError(f"unknown format: {doc['format']!r}")
    return fn(doc)


def load_path(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise JsonError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise JsonError(f"malformed JSON in {path}: {exc}") from exc
    return from_json(doc)
