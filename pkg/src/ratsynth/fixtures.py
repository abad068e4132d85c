"""Built-in example arenas, profiles, and objectives.

``fig1``: a three-player game (Alice, Bob, Charlie) on six vertices.  Alice
chooses at n0 between n1 and n2; Charlie chooses at n1 between a vertex
labeled {a,c} and one labeled {c}; Bob chooses at n2 between {a,b} and {c};
the three leaf vertices return to n0.  Each player wants to visit a vertex
marked by their initial letter; objectives come in an eventually form (F) and
an infinitely-often form (GF).

``p2p``: a two-agent variable arena where agent i controls an upload bit u_i
and a download bit d_i, with objective GF(d_i & u_{1-i}); the tit-for-tat
profile uploads first and then mirrors the other agent's last upload bit.
"""

from __future__ import annotations

from .arena import Arena, ArenaError, arena_from_variables
from .ltl import parse
from .strategy import Profile, Strategy, positional_strategy

W = "w"  # dummy action for players without a real choice at a vertex

ALICE, BOB, CHARLIE = 0, 1, 2


def fig1_arena() -> Arena:
    vertices = ("n0", "n1", "n2", "gAC", "gC", "gAB")
    actions = (("a1", "a2", W), ("b1", "b2", W), ("c1", "c2", W))
    available = {}
    for i in range(3):
        for v in vertices:
            available[(i, v)] = (W,)
    available[(ALICE, "n0")] = ("a1", "a2")
    available[(BOB, "n2")] = ("b1", "b2")
    available[(CHARLIE, "n1")] = ("c1", "c2")
    delta = {
        ("n0", ("a1", W, W)): "n1",
        ("n0", ("a2", W, W)): "n2",
        ("n1", (W, W, "c1")): "gAC",
        ("n1", (W, W, "c2")): "gC",
        ("n2", (W, "b1", W)): "gAB",
        ("n2", (W, "b2", W)): "gC",
        ("gAC", (W, W, W)): "n0",
        ("gC", (W, W, W)): "n0",
        ("gAB", (W, W, W)): "n0",
    }
    labels = {
        "n0": frozenset(), "n1": frozenset(), "n2": frozenset(),
        "gAC": frozenset({"a", "c"}),
        "gC": frozenset({"c"}),
        "gAB": frozenset({"a", "b"}),
    }
    return Arena(name="fig1", vertices=vertices, initial="n0", n_players=3,
                 actions=actions, available=available, delta=delta,
                 labels=labels, props=frozenset({"a", "b", "c"}))


def fig1_profile_dotted() -> Profile:
    arena = fig1_arena()
    return Profile((
        positional_strategy(arena, ALICE, {"n0": "a2"}),
        positional_strategy(arena, BOB, {"n2": "b1"}),
        positional_strategy(arena, CHARLIE, {"n1": "c2"}),
    ))


def fig1_profile_dashed() -> Profile:
    arena = fig1_arena()
    return Profile((
        positional_strategy(arena, ALICE, {"n0": "a1"}),
        positional_strategy(arena, BOB, {"n2": "b2"}),
        positional_strategy(arena, CHARLIE, {"n1": "c1"}),
    ))


def fig1_objectives_f():
    """Eventually-form reading: each player wants to visit their letter."""
    return (parse("F a"), parse("F b"), parse("F c"))


def fig1_objectives_gf():
    """Infinitely-often reading of the same objectives."""
    return (parse("G F a"), parse("G F b"), parse("G F c"))


def p2p_arena() -> Arena:
    return arena_from_variables([{"u0", "d0"}, {"u1", "d1"}], name="p2p")


def p2p_objectives():
    return (parse("G F (d0 & u1)"), parse("G F (d1 & u0)"))


def _titfortat(agent: int) -> Strategy:
    me, other = agent, 1 - agent
    up = frozenset({f"u{me}", f"d{me}"})
    down = frozenset({f"d{me}"})
    arena = p2p_arena()
    memory = ("coop", "defect")
    update = {}
    for m in memory:
        for a0 in arena.actions[0]:
            for a1 in arena.actions[1]:
                joint = (a0, a1)
                update[(m, joint)] = "coop" if f"u{other}" in joint[other] else "defect"
    output = {"coop": up, "defect": down}
    return Strategy(owner=agent, memory=memory, initial_memory="coop",
                    update=update, output=output, input_kind="actions")


def titfortat_profile() -> Profile:
    return Profile((_titfortat(0), _titfortat(1)))


FIXTURES = {
    "fig1": fig1_arena,
    "p2p": p2p_arena,
    "fig1-dotted": fig1_profile_dotted,
    "fig1-dashed": fig1_profile_dashed,
    "titfortat": titfortat_profile,
    "fig1-F": fig1_objectives_f,
    "fig1-GF": fig1_objectives_gf,
    "p2p-objectives": p2p_objectives,
}


def load_fixture(name: str):
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ArenaError(f"unknown fixture: {name!r}") from None
