"""Rational synthesis toolkit.

Finite concurrent multiplayer games with LTL and lattice-valued objectives:
exact verification of strategy profiles against dominant-strategy, Nash, and
subgame-perfect solution concepts, bounded-memory synthesis, alternating
parity tree automata, and lattice-valued Buchi games.
"""

__version__ = "0.1.0"
