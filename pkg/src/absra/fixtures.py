"""Bundled single-tank example.

The plant tracks the water level reported by four uncontrollable sensor
events and the valve commands ``q_o=0`` (close) and ``q_o=1`` (open). With
the valve open the level can only fall. State 5 is the desirable marker
state and state 9 (level extremely high) is the bad one.
"""

from __future__ import annotations

from .alphabet import Alphabet, Event
from .automaton import Automaton

LEVELS = ("h=L", "h=M", "h=H", "h=EH")
VALVES = ("q_o=0", "q_o=1")

TANK_TRANSITIONS = (
    (0, "h=L", 1), (1, "q_o=0", 2), (1, "q_o=1", 5), (5, "h=L", 1),
    (2, "h=L", 1), (2, "h=M", 3), (3, "q_o=0", 4), (3, "q_o=1", 5),
    (4, "h=M", 3), (4, "h=H", 6), (6, "q_o=0", 8), (6, "q_o=1", 7),
    (7, "h=M", 3), (8, "h=EH", 9),
)


def tank_alphabet() -> Alphabet:
    return Alphabet([Event(n, controllable=False) for n in LEVELS]
                    + [Event(n, controllable=True) for n in VALVES])


def tank_plant() -> Automaton:
    return Automaton.build(tank_alphabet(), TANK_TRANSITIONS, 0,
                           marked=(5, 9), bad=(9,), states=range(10))


def tank_supervisor() -> Automaton:
    """The plant with ``q_o=0`` disabled once the level is high; every state
    marked."""
    trans = [t for t in TANK_TRANSITIONS if t != (6, "q_o=0", 8) and t != (8, "h=EH", 9)]
    states = [s for s in range(10) if s not in (8, 9)]
    return Automaton.build(tank_alphabet(), trans, 0, marked=states, states=states)


def tank_requirement() -> Automaton:
    """Level-only requirement that never admits ``h=EH``."""
    alpha = tank_alphabet().restrict(LEVELS)
    return Automaton.build(alpha, [(0, ev, 0) for ev in LEVELS[:3]], 0, marked=(0,))


def tank_relation() -> dict:
    """Each level reading may be reported as any level reading."""
    return {ev: frozenset((u,) for u in LEVELS) for ev in LEVELS}


def low_report_attack():
    """Single-state attack reporting every level as ``h=L`` and forwarding
    valve commands unchanged."""
    from .transducer import Transducer
    row = {(ev, ("h=L",)): 0 for ev in LEVELS}
    row.update({(ev, (ev,)): 0 for ev in VALVES})
    return Transducer(tank_alphabet(), ("y0",), (row,), 0, frozenset({0}), bound=1)
